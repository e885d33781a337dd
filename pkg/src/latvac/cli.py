"""``latvac`` command line interface.

Exit codes: 0 success, 1 domain error, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import discform, heisenberg, modcat, neighbors, orbifold, qseries
from .errors import LatvacError
from .io import ParseError, format_matrix, parse_automorphism_file, parse_lattice_file, parse_vector
from .lattice import is_even, is_self_dual, norm_counts, root_sublattice_det, roots


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def _kv(pairs) -> str:
    # plain "key: value" lines, so fixed strings can be grepped for
    return "\n".join(f"{k}: {v}" for k, v in pairs)


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _sign(e: Fraction) -> str:
    """``e^{2 pi i e}`` for ``e`` in ``{0, 1/2}``, else the exponent."""
    if e == 0:
        return "+1"
    if e == Fraction(1, 2):
        return "-1"
    return f"e^(2 pi i {e})"


# -- lattice ------------------------------------------------------------------------------


def cmd_lattice(args) -> str:
    lat = parse_lattice_file(args.lattice)
    if args.action == "info":
        pairs = [
            ("rank", lat.rank),
            ("det", lat.det),
            ("even", _yn(is_even(lat))),
            ("self dual", _yn(is_self_dual(lat))),
            ("positive definite", _yn(lat.is_positive_definite)),
        ]
        if lat.is_positive_definite:
            rs = roots(lat)
            pairs += [("roots", len(rs)), ("root det", root_sublattice_det(lat, rs))]
            counts = norm_counts(lat, args.bound)
            pairs.append(("norm counts", " ".join(f"{k}:{v}" for k, v in counts.items())))
        return _kv(pairs)
    if args.action == "theta":
        return str(qseries.theta_series(lat, prec=args.prec))
    form = discform.from_gram(lat)
    pairs = [
        ("group", discform.group_label(form)),
        ("order", form.size),
        ("q on generators", " ".join(str(x) for x in form.q_gen)),
        ("nondegenerate", _yn(discform.is_nondegenerate(form))),
        ("gamma2 exponent", discform.gauss_sum_gamma2(form)),
    ]
    if form.size <= 4096:
        pairs.append(("q values", " ".join(str(x) for x in sorted(form.q_values()))))
    return _kv(pairs)


# -- neighbors -----------------------------------------------------------------------------


def cmd_neighbor(args) -> str:
    lat = parse_lattice_file(args.lattice)
    b = parse_vector(args.b, lat.rank)
    cls = neighbors.classify_Lb(lat, b)
    lines = [
        _kv(
            [
                ("case", cls.tag),
                ("b", _vec(cls.b)),
                ("L_b form", " ".join(str(x) for x in sorted(cls.form.q_values()))),
                ("table", " | ".join(" ".join(str(x) for x in row) for row in cls.table)),
            ]
        )
    ]
    if cls.tag == neighbors.CASE_0MOD4:
        nb = neighbors.neighbor(lat, b)
        rc, rd = neighbors.fingerprint(nb) if nb.is_positive_definite else (None, None)
        lines.append(_kv([("neighbor roots", rc), ("neighbor root det", rd)]))
        lines.append("neighbor gram:\n" + format_matrix(nb.gram))
    return "\n".join(lines)


def cmd_neighbor_search(args) -> str:
    if args.budget < 0:
        raise LatvacError("budget must be nonnegative")
    lat = parse_lattice_file(args.lattice)
    found = neighbors.neighbor_search(lat, args.budget)
    lines = [f"b={_vec(f.b)} roots={f.root_count} root_det={f.root_det}" for f in found]
    summary = neighbors.fingerprint_summary(found)
    lines += [f"fingerprint ({rc}, {rd}): {n}" for (rc, rd), n in sorted(summary.items())]
    return "\n".join(lines)


# -- characters ----------------------------------------------------------------------------


def cmd_character(args) -> str:
    lat = parse_lattice_file(args.lattice)
    mu = parse_vector(args.coset, lat.rank) if args.coset else None
    return str(qseries.module_character(lat, mu, prec=args.prec))


def _grid(m: qseries.ModularData) -> str:
    return "\n".join(" ; ".join(str(e) for e in row) for row in m.entries)


def cmd_zhu(args) -> str:
    lat = parse_lattice_file(args.lattice)
    form = discform.from_gram(lat)
    if form.size > 256:
        raise LatvacError(f"|D| = {form.size} is too large to print")
    labels = " ".join(_vec(a) for a in form.elements())
    out = [f"labels: {labels}", "T:", _grid(qseries.zhu_T(form, lat.rank)), "S:", _grid(qseries.zhu_S(form))]
    if form.size <= 16:
        rel = qseries.zhu_relations_exact(form, lat.rank)
        out += [f"{k}: {'exact ok' if v else 'FAIL'}" for k, v in rel.items()]
    else:
        rel = qseries.zhu_relations_numeric(form, lat.rank)
        out += [f"{k}: {'numeric ok' if v else 'FAIL'}" for k, v in rel.items()]
    return "\n".join(out)


# -- orbifold ------------------------------------------------------------------------------


def _parse_dims(text: str) -> dict[int, int]:
    out = {}
    for part in text.split(","):
        key, sep, val = part.partition("=")
        try:
            if not sep:
                raise ValueError
            out[int(key)] = int(val)
        except ValueError:
            raise ParseError(f"bad --dims entry {part!r}: expected d=value") from None
    return out


def cmd_orbifold(args) -> str:
    lat = parse_lattice_file(args.lattice)
    sigma = parse_automorphism_file(args.automorphism, lat)
    dims = _parse_dims(args.dims) if args.dims else None
    rep = orbifold.orbifold_report(lat, sigma, dims=dims, phi=args.phi, attest_lift=args.attest_lift)
    t = rep.type
    pairs = [
        ("order", t.n),
        ("rho", t.rho),
        ("type", str(t)),
        ("power weights", " ".join(f"{i}:{w}" for i, w in rep.power_weights.items()) or "-"),
        ("fusion group", discform.group_label(rep.fusion)),
        ("fusion q values", "{" + ",".join(str(x) for x in sorted(rep.fusion.q_values())) + "}"),
        ("isotropic pair", " / ".join(" ".join(_vec(a) for a in s) for s in rep.pair) if rep.pair else "none"),
        ("phi", rep.phi),
    ]
    if rep.dims is not None:
        pairs.append(("dims", " ".join(f"{d}={v}" for d, v in sorted(rep.dims.items()))))
    pairs.append(("dim V1 orb", rep.dim_orb if rep.dim_orb is not None else "n/a"))
    out = _kv(pairs)
    if rep.notes:
        out += "\n" + "\n".join(f"note: {n}" for n in rep.notes)
    if args.summary:
        out += f"\nsummary type={t} rho={t.rho} dim_orb={rep.dim_orb}"
    return out


# -- schur ---------------------------------------------------------------------------------


def cmd_schur(args) -> str:
    lat = parse_lattice_file(args.lattice)
    sigma = parse_automorphism_file(args.involution, lat)
    rep = heisenberg.schur_indicator_involution(lat, sigma)
    pairs = [
        ("|A|", rep.order_A),
        ("gamma2", _sign(rep.gamma2)),
        ("split", _yn(rep.split)),
        ("split witness size", rep.witness_size),
        ("dim X", rep.dim_X),
    ]
    if rep.zero_count is not None:
        pairs.append(("zeros of q", rep.zero_count))
    pairs += [
        ("nullity", rep.nullity),
        ("verdict", rep.verdict),
        ("coset shortcut", _yn(rep.shortcut)),
        ("indicator", f"{rep.nu:+d}"),
    ]
    return _kv(pairs)


# -- modcat --------------------------------------------------------------------------------


def parse_group_spec(text: str) -> tuple[int, ...]:
    if text.strip() in ("", "0", "1"):
        return ()
    try:
        orders = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ParseError(f"bad group spec {text!r}: expected orders like 2,2") from None
    if any(d < 2 for d in orders):
        raise ParseError("cyclic orders must be at least 2")
    return orders


def parse_q_spec(text: str, orders) -> discform.FinQuadForm:
    """``q1,...,qk[;b12,b13,...,b(k-1)k]`` with pairs ``i < j`` in lexicographic order."""
    k = len(orders)
    qpart, _, bpart = text.partition(";")
    try:
        qs = [Fraction(t) for t in qpart.split(",")] if qpart.strip() else []
        bs = [Fraction(t) for t in bpart.split(",")] if bpart.strip() else []
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad q spec {text!r}") from None
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    if len(qs) != k or (bs and len(bs) != len(pairs)):
        raise ParseError(f"q spec needs {k} q values and optionally {len(pairs)} b values")
    b = [[Fraction(0)] * k for _ in range(k)]
    for (i, j), v in zip(pairs, bs):
        b[i][j] = b[j][i] = v
    return discform.FinQuadForm.make(orders, qs, b)


def cmd_modcat(args) -> str:
    orders = parse_group_spec(args.group)
    form = parse_q_spec(args.q, orders)
    w = modcat.cocycle_from_form(form)
    out = [
        _kv(
            [
                ("group", discform.group_label(form)),
                ("q values", " ".join(str(x) for x in form.q_values())),
                ("nondegenerate", _yn(discform.is_nondegenerate(form))),
                ("cocycle denominator", w.den),
            ]
        )
    ]
    if args.verify:
        chk = modcat.verify_abelian_cocycle(w)
        out.append("coherence: ok" if chk else f"coherence: FAIL {chk.relation} at {chk.instance}")
        same = modcat.trace(w) == modcat.form_values(form)
        out.append(f"trace roundtrip: {'ok' if same else 'FAIL'}")
        out.append(f"balancing: {'ok' if modcat.check_balancing(form, w) else 'FAIL'}")
    if args.verlinde:
        S, _ = modcat.pointed_modular_data(form)
        table = modcat.verlinde(S)
        els = list(form.elements())
        for a in els:
            row = [_vec(table.product(a, b)[0]) for b in els]
            out.append(f"{_vec(a)}: " + " ".join(row))
        law = bool((table.N == modcat.group_law_table(orders)).all())
        out.append(f"group law: {'ok' if law else 'FAIL'}")
    return "\n".join(out)


# -- entry point ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="latvac", description="Lattice, orbifold and modular category invariants.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("lattice", help="basic invariants, theta series, discriminant form")
    s.add_argument("action", choices=["info", "theta", "dform"])
    s.add_argument("lattice")
    s.add_argument("--prec", type=int, default=4, help="theta series precision (exponent bound)")
    s.add_argument("--bound", type=int, default=6, help="norm bound for info counts")
    s.set_defaults(func=cmd_lattice)

    s = sub.add_parser("neighbor", help="the neighbor L_b + Z b/2")
    s.add_argument("lattice")
    s.add_argument("--b", required=True, help="comma-separated coordinates")
    s.set_defaults(func=cmd_neighbor)

    s = sub.add_parser("neighbor-search", help="fingerprints of neighbors")
    s.add_argument("lattice")
    s.add_argument("--budget", type=int, required=True)
    s.set_defaults(func=cmd_neighbor_search)

    s = sub.add_parser("character", help="Theta_mu / eta^rank")
    s.add_argument("lattice")
    s.add_argument("--coset", help="dual vector mu, comma-separated p/q")
    s.add_argument("--prec", type=int, required=True)
    s.set_defaults(func=cmd_character)

    s = sub.add_parser("zhu", help="S and T matrices of the discriminant form")
    s.add_argument("lattice")
    s.set_defaults(func=cmd_zhu)

    s = sub.add_parser("orbifold", help="type, fusion group and dimension formula")
    s.add_argument("lattice")
    s.add_argument("automorphism")
    s.add_argument("--dims", help="d=dim V1^(sigma^d) for each divisor d of n")
    s.add_argument("--phi", choices=list(orbifold.PHI_MODES), default="totient")
    s.add_argument("--attest-lift", action="store_true", help="assert the standard lift has order n")
    s.add_argument("--summary", action="store_true", help="append a one-line summary")
    s.set_defaults(func=cmd_orbifold)

    s = sub.add_parser("schur", help="Schur indicator of an involution orbifold")
    s.add_argument("lattice")
    s.add_argument("involution")
    s.set_defaults(func=cmd_schur)

    s = sub.add_parser("modcat", help="pointed modular categories")
    mc = s.add_subparsers(dest="modcat_command", required=True, parser_class=_Parser)
    f = mc.add_parser("from-form", help="cocycle of a quadratic form")
    f.add_argument("group", help="cyclic orders, e.g. 2,2")
    f.add_argument("q", help="q1,...,qk[;b12,...] as rationals")
    f.add_argument("--verify", action="store_true")
    f.add_argument("--verlinde", action="store_true")
    f.set_defaults(func=cmd_modcat)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = args.func(args)
    except ParseError as exc:
        print(f"latvac: error: {exc}", file=sys.stderr)
        return 2
    except LatvacError as exc:
        print(f"latvac: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
