"""Command-line entry point: ffdyn [field options] <command> [options].

Every report is canonical JSON (sorted keys, rationals as {num, den}
strings, no floats) and embeds the full run configuration and the library
version, so identical invocations produce byte-identical output.

Exit codes: 0 ok, 2 parse error, 3 budget exceeded, 4 hypothesis failure,
5 factorization failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .errors import BudgetError, FactorizationError, HypothesisError, ParseError
from .funcfield import Place, places_up_to_degree
from .gf import GF
from .textio import format_frac, format_place, parse_kpoly, parse_modulus, parse_place, parse_point

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_HYPOTHESIS, EXIT_FACTOR = 0, 2, 3, 4, 5

_ERRORS = {
    BudgetError: (EXIT_BUDGET, "budget"),
    HypothesisError: (EXIT_HYPOTHESIS, "hypothesis"),
    FactorizationError: (EXIT_FACTOR, "factorization"),
}


def canonical_json(obj) -> str:
    _check_no_floats(obj)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def _check_no_floats(obj):
    if isinstance(obj, float):
        raise TypeError(f"float {obj!r} in report")
    if isinstance(obj, dict):
        for v in obj.values():
            _check_no_floats(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _check_no_floats(v)


def _frac_dict(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _places(F, text: str | None) -> list[Place]:
    if not text:
        return []
    return [parse_place(F, s) for s in text.split(",") if s.strip()]


def _point_list(F, items) -> list:
    out = []
    for item in items or []:
        out.extend(parse_point(F, s) for s in item.split(",") if s.strip())
    return out


def _ints(items) -> list[int]:
    out = []
    for item in items or []:
        out.extend(int(s) for s in str(item).split(",") if s.strip())
    return out


def _map(F, text):
    from .ratmap import RatMap
    return RatMap.parse(F, text)


# -- commands ---------------------------------------------------------------

def cmd_orbit(F, a):
    from .ratmap import orbit
    phi = _map(F, a.map)
    rec = orbit(phi, parse_point(F, a.alpha), a.n)
    return {"map": str(phi), "orbit": rec.to_dict()}, None


def cmd_heights(F, a):
    from .funcfield import weil_height
    from .heights import canonical_height, functoriality_constant, is_preperiodic
    phi = _map(F, a.map)
    z = parse_point(F, a.z)
    C = functoriality_constant(phi)
    out = {"map": str(phi), "z": format_frac(z), "weil_height": weil_height(z), "C": C,
           "preperiodicity": is_preperiodic(phi, z, C).to_dict()}
    out["canonical_height"] = canonical_height(phi, z, Fraction(a.eps), C).to_dict()
    return out, None


def cmd_reduction(F, a):
    from .reduction import bad_reduction_places, reduction_type
    phi = _map(F, a.map)
    bad = bad_reduction_places(phi)
    places = _places(F, a.place) or (list(bad) + [pl for pl in places_up_to_degree(F, 1, True)
                                                  if pl not in bad])
    places = sorted(set(places), key=lambda pl: pl.sort_key())
    return {"map": str(phi), "bad_places": [format_place(pl) for pl in bad],
            "types": [reduction_type(phi, pl).to_dict() for pl in places]}, None


def cmd_witness(F, a):
    from .reduction import noniso_set_witness, revalidate_witness
    phi = _map(F, a.map)
    beta = parse_point(F, a.beta)
    rep = noniso_set_witness(phi, beta, a.nmax, _places(F, a.place) or None, a.nmin)
    out = rep.to_dict()
    out["revalidated"] = revalidate_witness(rep, phi, beta) if rep.found else False
    return out, None


def cmd_integral_scan(F, a):
    from .integrality import PlaceSet, auto_S, orbit_integral_scan
    phi = _map(F, a.map)
    alpha, beta = parse_point(F, a.alpha), parse_point(F, a.beta)
    S = PlaceSet(frozenset(_places(F, a.S)))
    if a.auto_S:
        S = auto_S(phi, beta, S)
    rep = orbit_integral_scan(phi, alpha, beta, S, a.N)
    out = rep.to_dict()
    out.update({"map": str(phi), "alpha": format_frac(alpha), "beta": format_frac(beta),
                "S": S.to_list()})
    return out, rep.csv()


def cmd_zsigmondy(F, a):
    from .zsigmondy import zsigmondy_scan
    phi = _map(F, a.map)
    rep = zsigmondy_scan(phi, parse_point(F, a.alpha), parse_point(F, a.beta), _ints(a.ell), a.N)
    return rep.to_dict(), rep.csv()


def cmd_curve_genus(F, a):
    from .superelliptic import SuperellipticCurve
    return SuperellipticCurve(a.ell, parse_kpoly(F, a.F)).to_dict(), None


def cmd_curve_verdict(F, a):
    from .ratmap import iterate_poly
    from .reduction import noniso_set_witness
    from .superelliptic import SuperellipticCurve, noniso_curve_verdict
    phi = _map(F, a.map)
    beta = parse_point(F, a.beta)
    _, R = iterate_poly(phi, a.n, beta)
    curve = SuperellipticCurve(a.ell, R)
    w = noniso_set_witness(phi, beta, a.n, _places(F, a.place) or None, n_min=a.n)
    out = {"curve": curve.to_dict(), "witness": w.to_dict()}
    out.update(noniso_curve_verdict(curve, w, phi, beta).to_dict())
    return out, None


def cmd_curve_ramified_sum(F, a):
    from .integrality import PlaceSet
    from .superelliptic import SuperellipticCurve, ramified_sum, ramified_sum_batch
    curve = SuperellipticCurve(a.ell, parse_kpoly(F, a.F))
    if a.batch:
        rows, slope = ramified_sum_batch(curve, a.batch, a.max_deg, a.seed)
        out = {"curve": curve.to_dict(), "rows": [r.to_dict() for r in rows], "slope": _frac_dict(slope)}
    else:
        S = PlaceSet(frozenset(_places(F, a.S)))
        rows = [ramified_sum(curve, x, S) for x in _point_list(F, a.a)]
        out = {"curve": curve.to_dict(), "S": S.to_list(), "rows": [r.to_dict() for r in rows]}
    csv = "a,height,sum\n" + "".join(f"{format_frac(r.a)},{r.height},{r.total}\n" for r in rows)
    return out, csv


def _unicritical(F, text):
    from .arboreal import UnicriticalMap
    return UnicriticalMap.from_ratmap(_map(F, text))


def cmd_arboreal_zram(F, a):
    from .arboreal import zram_scan
    f = _unicritical(F, a.map)
    return zram_scan(f, parse_point(F, a.beta), a.N, a.ell).to_dict(), None


def cmd_arboreal_tower(F, a):
    from .arboreal import degree_tower
    f = _unicritical(F, a.map)
    rows = degree_tower(f, parse_point(F, a.beta), a.N)
    csv = "n,newton_lower,certified_lower,exact\n" + "".join(
        f"{r.n},{r.newton_lower},{r.certified_lower},{'' if r.exact is None else r.exact}\n" for r in rows)
    return {"map": f.to_dict(), "rows": [r.to_dict() for r in rows]}, csv


def cmd_arboreal_finindex(F, a):
    from .arboreal import finindex_conditions
    f = _unicritical(F, a.map)
    return {"map": f.to_dict(), "n": a.n,
            "results": finindex_conditions(f, _point_list(F, a.gamma), a.n)}, None


def cmd_period_census(F, a):
    from .ratmap import residue_period
    phi = _map(F, a.map)
    alpha = parse_point(F, a.alpha)
    rows = []
    for pl in places_up_to_degree(F, a.max_degree, include_infinity=True):
        r = residue_period(phi, alpha, pl)
        d = {"place": format_place(pl), "N_p": pl.local_degree}
        d.update(r.to_dict())
        rows.append(d)
    csv = "place,N_p,status,tail,cycle\n" + "".join(
        f"{r['place']},{r['N_p']},{r['status']},{'' if r['tail'] is None else r['tail']},"
        f"{'' if r['cycle'] is None else r['cycle']}\n" for r in rows)
    return {"map": str(phi), "alpha": format_frac(alpha), "rows": rows}, csv


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ffdyn", description="Arithmetic dynamics over F_q(t).")
    ap.add_argument("--p", type=int, default=3, help="characteristic (default 3)")
    ap.add_argument("--e", type=int, default=1, help="constant field F_{p^e}")
    ap.add_argument("--modulus", default=None, help="modulus of F_{p^e} in g, e.g. 'g^2+1'")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="-", help="JSON report path ('-' for stdout)")
    ap.add_argument("--csv", default=None, help="optional CSV table path ('-' for stdout)")
    ap.add_argument("--version", action="version", version=f"ffdyn {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", help="forward orbit with heights")
    p.add_argument("--map", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--n", type=int, default=5)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("heights", help="functoriality constant, canonical height, preperiodicity")
    p.add_argument("--map", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--eps", default="1/64")
    p.set_defaults(func=cmd_heights)

    p = sub.add_parser("reduction", help="reduction types and bad places")
    p.add_argument("--map", required=True)
    p.add_argument("--place", help="comma-separated places (default: bad places and degree 1)")
    p.set_defaults(func=cmd_reduction)

    p = sub.add_parser("witness", help="non-isotriviality witness for a preimage set")
    p.add_argument("--map", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--nmax", type=int, default=4)
    p.add_argument("--nmin", type=int, default=1)
    p.add_argument("--place", help="comma-separated places to probe")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("integral-scan", help="S-integral points in an orbit")
    p.add_argument("--map", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--S", default="inf", help="comma-separated places")
    p.add_argument("--auto-S", action="store_true", help="enlarge S by bad places and divisor data")
    p.add_argument("--N", type=int, default=10)
    p.set_defaults(func=cmd_integral_scan)

    p = sub.add_parser("zsigmondy", help="primitive divisors of f^n(alpha) - beta")
    p.add_argument("--map", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--ell", action="append", default=None, help="prime(s), repeatable or comma-separated")
    p.add_argument("--N", type=int, default=10)
    p.set_defaults(func=cmd_zsigmondy)

    curve = sub.add_parser("curve", help="superelliptic curves y^l = F(x)")
    csub = curve.add_subparsers(dest="curve_command", required=True)
    p = csub.add_parser("genus")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--F", required=True)
    p.set_defaults(func=cmd_curve_genus)
    p = csub.add_parser("verdict", help="F = radical of map^n(x) - beta")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--place", help="comma-separated places to probe")
    p.set_defaults(func=cmd_curve_verdict)
    p = csub.add_parser("ramified-sum")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--F", required=True)
    p.add_argument("--a", action="append", help="points, repeatable or comma-separated")
    p.add_argument("--S", default="inf")
    p.add_argument("--batch", type=int, default=0, help="random sample size (uses --seed)")
    p.add_argument("--max-deg", type=int, default=10)
    p.set_defaults(func=cmd_curve_ramified_sum)

    arb = sub.add_parser("arboreal", help="unicritical maps x^d + c")
    asub = arb.add_subparsers(dest="arboreal_command", required=True)
    p = asub.add_parser("zram")
    p.add_argument("--map", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--ell", type=int, default=2)
    p.set_defaults(func=cmd_arboreal_zram)
    p = asub.add_parser("tower")
    p.add_argument("--map", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--N", type=int, default=3)
    p.set_defaults(func=cmd_arboreal_tower)
    p = asub.add_parser("finindex")
    p.add_argument("--map", required=True)
    p.add_argument("--gamma", action="append", required=True)
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(func=cmd_arboreal_finindex)

    p = sub.add_parser("period-census", help="residue periods of alpha at small places")
    p.add_argument("--map", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--max-degree", type=int, default=2)
    p.set_defaults(func=cmd_period_census)
    return ap


def _config(a) -> dict:
    return {k: v for k, v in sorted(vars(a).items()) if k != "func"}


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    report = {"version": __version__, "config": _config(a)}
    code = EXIT_OK
    csv = None
    try:
        try:
            modulus = parse_modulus(a.p, a.modulus) if a.modulus else None
            F = GF(a.p, a.e, modulus)
        except (ValueError, HypothesisError) as exc:
            raise ParseError(f"invalid field spec: {exc}") from exc
        report["field"] = {"p": F.p, "e": F.e, "q": F.q, "modulus": list(F.modulus)}
        result, csv = a.func(F, a)
        report["result"] = result
    except (ValueError, BudgetError, HypothesisError, FactorizationError) as exc:
        # ParseError is a ValueError; bad field specs raise ValueError too
        code, kind = _ERRORS[type(exc)] if type(exc) in _ERRORS else (EXIT_PARSE, "parse")
        report["error"] = {"kind": kind, "message": str(exc)}
        print(f"ffdyn: {kind} error: {exc}", file=sys.stderr)
    _write(a.out, canonical_json(report))
    if csv is not None and a.csv:
        _write(a.csv, csv)
    return code


if __name__ == "__main__":
    sys.exit(main())
