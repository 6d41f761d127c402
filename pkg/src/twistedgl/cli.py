"""Command-line surface: exact queries, seeded corpus generation and batch checks.

Documents are JSON with rationals as "num/den" strings and eighth roots of
unity as "zeta8^k".  Exit codes: 0 pass, 1 check failure, 2 usage error,
3 oracle inconclusive.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .classes import (ClassParameter, build_SO_even, build_SO_odd, build_Sp,
                      build_tGL_even, build_tGL_odd, class_invariant,
                      corresponds, is_elliptic, twist_invariant)
from .endoscopy import (enumerate_elliptic_data, eta_so, eta_sp,
                        gs_constancy_check, quasisplit_space, transfer_factor,
                        transfer_factor_whittaker)
from .etale import make_algebra, quadratic_tower, split_tower, trace_form_quadratic
from .gsnorm import (GSConfiguration, gs_norm, gs_section, make_ambient,
                     random_config, rigidify, u_of_xy, xy_condition)
from .linalg import mat, mat_add, mat_mul, transpose
from .localfield import (QP, LocalFieldDescriptor, Solubility, as_prime,
                         hilbert_qp, solubility_budget, solubility_oracle,
                         square_class, square_class_table)
from .params import FormalConstituent, FormalParameter, classify, hypothesis_even_SO
from .qform import (QuadForm, diag_form, equivalent, invariants, is_isotropic,
                    quad_form, scale, witt_decompose)
from .weil import OracleError, epsilon_half, gauss_oracle, weil_index

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# literals


def rat_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def mat_doc(m) -> list[list[str]]:
    return [[rat_str(x) for x in row] for row in m]


def poly_doc(p) -> list[str]:
    return [rat_str(c) for c in p]


def parse_rat(s) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational literal {s!r}: {exc}") from exc


def parse_form(doc, p=None) -> QuadForm:
    if not isinstance(doc, dict):
        raise UsageError("form literal must be an object")
    prime = as_prime(doc.get("p", p))
    label = doc.get("label")
    if "diag" in doc:
        return diag_form([parse_rat(x) for x in doc["diag"]], prime, label)
    if "gram" in doc:
        g = [[parse_rat(x) for x in row] for row in doc["gram"]]
        return quad_form(g, prime, label)
    raise UsageError("form literal needs 'diag' or 'gram'")


def form_doc(q: QuadForm) -> dict:
    doc = {"p": int(q.p), "gram": mat_doc(q.gram)}
    if q.label:
        doc["label"] = q.label
    return doc


def parse_field(doc) -> LocalFieldDescriptor:
    prime = as_prime(doc["p"])
    poly = [parse_rat(c) for c in doc.get("poly", [0, 1])]
    if len(poly) == 2:
        return LocalFieldDescriptor(prime, tuple(poly), "degree-one")
    cert = doc.get("certificate")
    candidates = [cert] if cert else [
        "quadratic-nonsquare-disc", "eisenstein", "unramified-irreducible-mod-p"]
    last = None
    for c in candidates:
        try:
            return LocalFieldDescriptor(prime, tuple(poly), c)
        except ValueError as exc:
            last = exc
    raise UsageError(f"no certificate applies to the polynomial: {last}")


def parse_algebra(doc):
    if not isinstance(doc, list) or not doc:
        raise UsageError("algebra literal must be a nonempty list of towers")
    towers = []
    for tower in doc:
        base = parse_field(tower["base"])
        step = tower["step"]
        if step == "split":
            towers.append(split_tower(base))
        elif isinstance(step, dict) and "d" in step:
            d = step["d"]
            coeffs = [parse_rat(c) for c in (d if isinstance(d, list) else [d])]
            coeffs += [Fraction(0)] * (base.degree - len(coeffs))
            towers.append(quadratic_tower(base, base.element(coeffs)))
        else:
            raise UsageError("tower step must be 'split' or {'d': ...}")
    return make_algebra(towers)


def parse_element(algebra, doc):
    if not isinstance(doc, list) or len(doc) != len(algebra.factors):
        raise UsageError("element literal: one coefficient array per factor")
    parts = []
    for f, coeffs in zip(algebra.factors, doc):
        d = f.base.degree
        vals = [parse_rat(c) for c in coeffs]
        if len(vals) != 2 * d:
            raise UsageError(f"factor needs 2*{d} coefficients")
        parts.append((f.base.element(vals[:d]), f.base.element(vals[d:])))
    return algebra.element(parts)


def element_doc(x) -> list[list[str]]:
    return [[rat_str(c) for c in a.coeffs] + [rat_str(c) for c in b.coeffs]
            for a, b in x.parts]


def parse_param(doc) -> ClassParameter:
    algebra = parse_algebra(doc["algebra"])
    p = algebra.p
    x = parse_element(algebra, doc["x"])
    c = parse_element(algebra, doc["c"]) if "c" in doc else None
    xd = square_class(parse_rat(doc["xD"]), p) if "xD" in doc else None
    a = square_class(parse_rat(doc["a"]), p) if "a" in doc else None
    return ClassParameter(doc["kind"], algebra, x, c, xd, a)


def parse_config(doc) -> GSConfiguration:
    amb_doc = doc["ambient"]
    q_v = parse_form(amb_doc["qV"])
    ambient = make_ambient(q_v, int(amb_doc.get("epsilon", 1)))
    x = mat([[parse_rat(v) for v in row] for row in doc["X"]])
    y = mat([[parse_rat(v) for v in row] for row in doc["Y"]])
    return GSConfiguration(ambient, x, y)


def config_doc(config: GSConfiguration) -> dict:
    return {
        "ambient": {"qV": form_doc(config.ambient.q_V),
                    "epsilon": config.ambient.epsilon},
        "X": mat_doc(config.X),
        "Y": mat_doc(config.Y),
    }


def parse_formal(doc) -> FormalParameter:
    p = as_prime(doc["p"])
    cs = []
    for c in doc["constituents"]:
        sign = c.get("sign")
        sign = {"+1": 1, "-1": -1, 1: 1, -1: -1, "none": None, None: None}[sign]
        det = c.get("det")
        detc = square_class(parse_rat(det), p) if det is not None else None
        cs.append(FormalConstituent(int(c["dim"]), sign is not None, sign,
                                    detc, int(c.get("mult", 1))))
    return FormalParameter(tuple(cs))


def read_input(args) -> dict:
    if getattr(args, "infile", None):
        with open(args.infile, "r", encoding="utf-8") as fh:
            return json.load(fh)
    if getattr(args, "json", None):
        return json.loads(args.json)
    data = sys.stdin.read()
    if not data.strip():
        raise UsageError("no input document (use --in, --json or stdin)")
    return json.loads(data)


def emit(doc, args) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def digest(doc) -> str:
    return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# verb implementations


def cmd_hilbert(args) -> int:
    a, b = parse_rat(args.a), parse_rat(args.b)
    value = hilbert_qp(a, b, args.p)
    doc = {"a": rat_str(a), "b": rat_str(b), "p": args.p, "hilbert": value}
    if args.oracle:
        depth = args.depth or solubility_budget(a, b, QP(args.p))
        verdict = solubility_oracle(a, b, QP(args.p), depth)
        doc["oracle"] = verdict.value
        doc["oracle_depth"] = depth
        emit(doc, args)
        if verdict is Solubility.INCONCLUSIVE:
            return EXIT_INCONCLUSIVE
        agree = (verdict is Solubility.SOLUBLE) == (value == 1)
        return EXIT_OK if agree else EXIT_CHECK_FAILED
    emit(doc, args)
    return EXIT_OK


def cmd_sqclass(args) -> int:
    cls = square_class(parse_rat(args.a), args.p)
    emit({"a": args.a, "p": args.p, "class": cls.representative}, args)
    return EXIT_OK


def cmd_qform(args) -> int:
    doc = read_input(args)
    if args.action == "equiv":
        q1, q2 = parse_form(doc["q1"]), parse_form(doc["q2"])
        emit({"equivalent": equivalent(q1, q2)}, args)
        return EXIT_OK
    q = parse_form(doc)
    if args.action == "invariants":
        inv = invariants(q)
        emit({"dim": inv.dim, "det": inv.det.representative,
              "dpm": inv.dpm.representative, "hasse": inv.hasse,
              "witt_index": inv.witt_index, "aniso_dim": inv.aniso_dim}, args)
    elif args.action == "witt":
        witt, kernel = witt_decompose(q)
        emit({"witt_index": witt,
              "kernel": {"aniso_dim": kernel.aniso_dim,
                         "det": kernel.det.representative,
                         "hasse": kernel.hasse}}, args)
    elif args.action == "isotropic":
        emit({"isotropic": is_isotropic(q)}, args)
    return EXIT_OK


def cmd_weil(args) -> int:
    if args.action == "index":
        q = parse_form(read_input(args))
        emit({"weil_index": str(weil_index(q))}, args)
        return EXIT_OK
    if args.action == "epsilon":
        if args.d is None or args.p is None:
            raise UsageError("epsilon needs --d and --p")
        value = epsilon_half(parse_rat(args.d), args.p)
        emit({"d": args.d, "p": args.p, "epsilon_half": str(value)}, args)
        return EXIT_OK
    if args.a is None or args.k is None or args.p is None:
        raise UsageError("oracle needs --a, --k and --p")
    try:
        res = gauss_oracle(parse_rat(args.a), args.p, args.k)
    except OracleError as exc:
        emit({"error": str(exc)}, args)
        return EXIT_INCONCLUSIVE
    emit({"value": [res.value.real, res.value.imag],
          "snapped": str(res.snapped),
          "snap_distance": res.snap_distance}, args)
    return EXIT_OK


def cmd_etale(args) -> int:
    doc = read_input(args)
    if args.action == "build":
        algebra = parse_algebra(doc)
        emit({"dim_over_Qp": algebra.dim_over_qp,
              "factors": [{"base_degree": f.base.degree,
                           "step": f.step_kind} for f in algebra.factors]}, args)
        return EXIT_OK
    algebra = parse_algebra(doc["algebra"])
    c = parse_element(algebra, doc["c"])
    q = trace_form_quadratic(algebra, c)
    emit(form_doc(q), args)
    return EXIT_OK


def cmd_class(args) -> int:
    doc = read_input(args)
    if args.action == "corresponds":
        dparam = parse_param(doc["delta"])
        gparam = parse_param(doc["gamma"])
        emit({"corresponds": corresponds(dparam, gparam)}, args)
        return EXIT_OK
    param = parse_param(doc)
    if args.action == "build":
        if param.kind == "tGL-even":
            emit({"delta": mat_doc(build_tGL_even(param))}, args)
        elif param.kind == "tGL-odd":
            emit({"delta": mat_doc(build_tGL_odd(param))}, args)
        elif param.kind == "SO-even":
            q, g = build_SO_even(param)
            emit({"q": form_doc(q), "gamma": mat_doc(g)}, args)
        elif param.kind == "SO-odd":
            q, g = build_SO_odd(param)
            emit({"q": form_doc(q), "gamma": mat_doc(g)}, args)
        elif param.kind == "Sp":
            q, g = build_Sp(param)
            emit({"q": form_doc(q), "gamma": mat_doc(g)}, args)
        else:
            raise UsageError(f"build does not surface kind {param.kind}")
    elif args.action == "invariant":
        inv = class_invariant(param)
        emit({"char_poly": poly_doc(inv.char_poly), "kind": inv.kind,
              "aux": [c.representative for c in inv.aux]}, args)
    elif args.action == "elliptic":
        emit({"elliptic": is_elliptic(param)}, args)
    return EXIT_OK


def cmd_gs(args) -> int:
    if args.action == "random":
        doc = read_input(args)
        q_v = parse_form(doc["qV"])
        ambient = make_ambient(q_v, int(doc.get("epsilon", 1)))
        config = random_config(ambient, args.seed)
        emit(config_doc(config), args)
        return EXIT_OK
    doc = read_input(args)
    if args.action == "section":
        q_v = parse_form(doc["ambient"]["qV"])
        ambient = make_ambient(q_v, int(doc["ambient"].get("epsilon", 1)))
        x = mat([[parse_rat(v) for v in row] for row in doc["X"]])
        gamma = mat([[parse_rat(v) for v in row] for row in doc["gamma"]])
        y = gs_section(ambient, x, gamma)
        emit({"Y": mat_doc(y)}, args)
        return EXIT_OK
    config = parse_config(doc)
    if args.action == "norm":
        emit({"gamma": mat_doc(gs_norm(config))}, args)
        return EXIT_OK
    # verify: the invariant battery
    checks = {}
    checks["xy_condition"] = xy_condition(config)
    if checks["xy_condition"]:
        u = u_of_xy(config)
        g1 = config.ambient.gram_q1
        checks["u_isometry"] = mat_mul(transpose(u), mat_mul(g1, u)) == g1
        delta, phi = rigidify(config)
        lhs = mat_mul(transpose(phi),
                      mat_mul(tuple(tuple(-config.ambient.epsilon * v for v in row)
                                    for row in config.ambient.q_V.gram), phi))
        rhs = mat_add(delta, tuple(tuple(config.ambient.epsilon * v for v in row)
                                   for row in transpose(delta)))
        checks["rigidify_isometry"] = lhs == rhs
        gamma = gs_norm(config)
        qg = config.ambient.q_V.gram
        checks["norm_isometry"] = mat_mul(transpose(gamma), mat_mul(qg, gamma)) == qg
        y2 = gs_section(config.ambient, config.X, gamma)
        checks["section_round_trip"] = gs_norm(
            GSConfiguration(config.ambient, config.X, y2)) == gamma
    emit({"checks": checks, "all_pass": all(checks.values())}, args)
    return EXIT_OK if all(checks.values()) else EXIT_CHECK_FAILED


def cmd_endo(args) -> int:
    if args.action == "enumerate":
        data = enumerate_elliptic_data(args.n, args.p)
        emit({"count": len(data),
              "data": [{"nO": d.n_O, "nS": d.n_S,
                        "chi": d.chi.representative,
                        "simple": d.simple} for d in data]}, args)
        return EXIT_OK
    if args.action == "eta":
        if args.kind == "sp":
            emit({"eta": eta_sp(args.n, args.p).representative}, args)
        else:
            doc = read_input(args)
            vp = parse_form(doc["binary"])
            emit({"eta": eta_so(vp, parse_rat(doc["y"]), args.n).representative}, args)
        return EXIT_OK
    doc = read_input(args)
    if args.action == "delta":
        space = parse_form(doc["space"])
        delta = mat([[parse_rat(v) for v in row] for row in doc["delta"]])
        plain = transfer_factor(space, delta, args.n)
        lam = transfer_factor_whittaker(space, delta, args.n)
        emit({"delta": plain, "delta_lambda": str(lam)}, args)
        return EXIT_OK
    # check
    config = parse_config(doc)
    ok = gs_constancy_check(config, args.n)
    emit({"constancy": ok}, args)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_param(args) -> int:
    doc = read_input(args)
    phi = parse_formal(doc)
    if args.action == "classify":
        datum = classify(phi)
        emit({"nO": datum.n_O, "nS": datum.n_S,
              "chi": datum.chi.representative, "simple": datum.simple}, args)
    else:
        emit({"comes_from_even_SO": hypothesis_even_SO(phi)}, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# corpus


def _corpus_entries(seed: int, primes, ns, count: int):
    """The deterministic corpus plan: per (p, n), count configurations cycling
    through every discriminant class (split included) and both twist cosets."""
    entries = []
    for p in primes:
        classes = [c.representative for c in square_class_table(p)]
        for n in ns:
            # the split K at 2n = 2 would make V the isotropic binary space,
            # which names no endoscopic group and is excluded
            kreps = [k for k in classes if n > 1 or k != 1]
            for i in range(count):
                k = kreps[i % len(kreps)]
                c_choices = [1]
                if square_class(k, p).representative != 1:
                    nonnorm = next(x.representative for x in square_class_table(p)
                                   if hilbert_qp(k, x.representative, p) == -1)
                    c_choices = [1, nonnorm]
                c = c_choices[(i // len(kreps)) % len(c_choices)]
                entries.append({
                    "seed": ((seed * 1000003 + p) * 1000003 + n) * 1000003 + i,
                    "p": p, "n": n, "K": k, "c": c, "index": i,
                })
    return entries


def _run_entry(entry) -> dict:
    p, n = entry["p"], entry["n"]
    q_v = quasisplit_space(2 * n, square_class(entry["K"], p),
                           square_class(entry["c"], p), p)
    ambient = make_ambient(q_v, 1)
    config = random_config(ambient, entry["seed"])
    cdoc = config_doc(config)
    from .qform import scale as qscale
    lhs = transfer_factor_whittaker(ambient.q_V, rigidify(config)[0], n)
    rhs = weil_index(qscale(2 * (-1) ** n, ambient.q_V))
    record = dict(entry)
    record["inputs_digest"] = digest(cdoc)
    record["lhs"] = str(lhs)
    record["rhs"] = str(rhs)
    record["pass"] = lhs == rhs
    return record


def cmd_corpus(args) -> int:
    primes = [int(x) for x in args.p.split(",")]
    ns = [int(x) for x in args.n.split(",")]
    entries = _corpus_entries(args.seed, primes, ns, args.count)
    if args.action == "generate":
        emit({"tool_version": __version__, "generator_version": 1,
              "seed": args.seed, "primes": primes, "ns": ns,
              "count": args.count, "entries": entries}, args)
        return EXIT_OK
    started = time.time()
    records = [_run_entry(e) for e in entries]
    records.sort(key=lambda r: (r["p"], r["n"], r["index"]))
    failures = sum(1 for r in records if not r["pass"])
    manifest = {
        "tool_version": __version__, "generator_version": 1,
        "seed": args.seed, "primes": primes, "ns": ns, "count": args.count,
        "records": records, "failures": failures,
        "elapsed_seconds": round(time.time() - started, 3),
    }
    emit(manifest, args)
    return EXIT_OK if failures == 0 else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# argument parsing


def _add_io(sub):
    sub.add_argument("--in", dest="infile", help="input document path")
    sub.add_argument("--json", help="inline input document")
    sub.add_argument("--out", help="output document path")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="twistedgl",
        description="exact geometric invariants of twisted general linear spaces")
    sp = ap.add_subparsers(dest="verb", required=True)

    s = sp.add_parser("hilbert", help="Hilbert symbol (a,b)_p")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--oracle", action="store_true",
                   help="cross-check with the solubility oracle")
    s.add_argument("--depth", type=int, default=None)
    _add_io(s)
    s.set_defaults(func=cmd_hilbert)

    s = sp.add_parser("sqclass", help="canonical square class")
    s.add_argument("a")
    s.add_argument("--p", type=int, required=True)
    _add_io(s)
    s.set_defaults(func=cmd_sqclass)

    s = sp.add_parser("qform", help="quadratic form queries")
    s.add_argument("action", choices=["invariants", "equiv", "witt", "isotropic"])
    _add_io(s)
    s.set_defaults(func=cmd_qform)

    s = sp.add_parser("weil", help="Weil index queries")
    s.add_argument("action", choices=["index", "epsilon", "oracle"])
    s.add_argument("--p", type=int)
    s.add_argument("--d", help="discriminant class for epsilon")
    s.add_argument("--a", help="coefficient for the oracle")
    s.add_argument("--k", type=int, help="oracle truncation level")
    _add_io(s)
    s.set_defaults(func=cmd_weil)

    s = sp.add_parser("etale", help="etale algebra operations")
    s.add_argument("action", choices=["build", "traceform"])
    _add_io(s)
    s.set_defaults(func=cmd_etale)

    s = sp.add_parser("class", help="class parameter operations")
    s.add_argument("action", choices=["build", "invariant", "corresponds", "elliptic"])
    _add_io(s)
    s.set_defaults(func=cmd_class)

    s = sp.add_parser("gs", help="norm-correspondence operations")
    s.add_argument("action", choices=["random", "norm", "section", "verify"])
    s.add_argument("--seed", type=int, default=0)
    _add_io(s)
    s.set_defaults(func=cmd_gs)

    s = sp.add_parser("endo", help="endoscopic data and transfer factors")
    s.add_argument("action", choices=["enumerate", "eta", "delta", "check"])
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--kind", choices=["sp", "so"], default="sp")
    _add_io(s)
    s.set_defaults(func=cmd_endo)

    s = sp.add_parser("param", help="formal parameter combinatorics")
    s.add_argument("action", choices=["classify", "hypothesis"])
    _add_io(s)
    s.set_defaults(func=cmd_param)

    s = sp.add_parser("corpus", help="seeded corpus generation and batch checks")
    s.add_argument("action", choices=["generate", "run"])
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--p", default="2,3,5,7")
    s.add_argument("--n", default="1,2,3")
    s.add_argument("--count", type=int, default=1000)
    _add_io(s)
    s.set_defaults(func=cmd_corpus)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"malformed input: {exc!r}", file=sys.stderr)
        return EXIT_USAGE
    except OracleError as exc:
        print(f"oracle failure: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
