"""Command-line driver.

Exit codes: 0 when every embedded check passes, 1 when a check fails (the
failing invariant is named on stderr), 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__, checks, gf, lattice, ore, plin, rla, witt
from .errors import RankDeficit, WittkitError


class CheckFailed(Exception):
    pass


def dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _ints(text):
    return tuple(int(x) for x in text.split(",") if x.strip() != "")


def _json_arg(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"not valid JSON: {exc}") from None


def _field(args):
    return gf.field(args.p, args.m)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + n for n in missing))


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# witt

def cmd_witt(args):
    _require(args, "s")
    W = witt.WittRing(_field(args), args.s)
    if args.action in ("add", "mul"):
        _require(args, "a", "b")
        a, b = W.vector(_ints(args.a)), W.vector(_ints(args.b))
        out = witt.witt_ring_op(a, b, args.action)
        return {"digits": list(out.digits)}, [",".join(map(str, out.digits))]
    if args.action == "digits":
        _require(args, "value")
        v = W.from_int(args.value)
        return {"digits": list(v.digits)}, [",".join(map(str, v.digits))]
    _require(args, "a")
    out = witt.witt_log(W.vector(_ints(args.a)))
    return {"digits": list(out.digits)}, [",".join(map(str, out.digits))]


# ---------------------------------------------------------------------------
# lattice

def _matrix(args):
    _require(args, "s", "rows")
    W = witt.WittRing(_field(args), args.s)
    return lattice.WittMatrix.from_gr_rows(W, [[int(x) for x in r] for r in args.rows])


def _type(args):
    _require(args, "type")
    return _ints(args.type)


def cmd_lattice(args):
    a = args.action
    if a == "smith":
        t, _, _ = lattice.smith_form(_matrix(args))
        return {"type": list(t)}, [",".join(map(str, t))]
    if a == "canon":
        U = _matrix(args)
        L = lattice.canonical_form(U, allow_degenerate=args.degenerate)
        return L.to_json(), [f"type {','.join(map(str, L.type))}", f"columns {list(map(list, L.key))}"]
    if a == "member":
        _require(args, "vector", "nr")
        U = _matrix(args)
        v = [U.ring.from_gr(int(x)) for x in args.vector]
        x = lattice.membership_solve(U, v, args.nr)
        if x is None:
            return {"member": False}, ["not a member"]
        coeffs = [t.to_gr() for t in x]
        return {"member": True, "coefficients": coeffs}, [f"member, coefficients {coeffs}"]
    if a == "enumerate":
        _require(args, "n")
        colength = args.colength if args.colength is not None else args.n * args.r
        counts, states = lattice.count_lattices_by_type(args.n, colength, _field(args))
        rows = sorted(counts.items(), reverse=True)
        return ({"colength": colength, "states": states,
                 "counts": [[list(t), c] for t, c in rows]},
                [f"{','.join(map(str, t))}: {c}" for t, c in rows])
    if a == "lie":
        t = _type(args)
        s = args.s if args.s is not None else sum(t) + 1
        T = lattice.lie_algebra(lattice.diagonal_lattice(t, _field(args), s))
        return ({"dim": T.dim, "theta_closed": T.theta_closed, "basis": [list(b) for b in T.basis]},
                [f"dim {T.dim}", f"theta-closed {T.theta_closed}"])
    if a == "homdim":
        t = _type(args)
        d = lattice.hom_dimension(lattice.diagonal_lattice(t, _field(args), sum(t)))
        return {"type": list(t), "hom_dimension": d}, [str(d)]
    if a == "deform":
        _require(args, "n")
        return _deform(args.n, args.n * args.r, _field(args))
    if a == "ci-check":
        _require(args, "n")
        rng = random.Random(args.seed)
        rep = lattice.verify_complete_intersection(args.n, args.n * args.r, args.trials,
                                                   _field(args), rng)
        rep = {k: v for k, v in rep.items() if k != "ranks"} | {"ranks": sorted(set(rep["ranks"]))}
        return rep, [f"ambient {rep['ambient_dim']}, variety {rep['variety_dim']}, "
                     f"jacobian ranks {rep['ranks']}"]
    raise UsageError(a)


def _deform(n, nr, F):
    edges, reached = lattice.specialization_chain(n, nr)
    out = []
    for g, sp, i, j in edges:
        fam = lattice.specialization_path(g, i, j, F)
        ok = fam.verify() and fam.special_type == sp
        out.append({"generic": list(g), "special": list(sp), "i": i, "j": j,
                    "witness": "path", "verified": ok})
        if not ok:
            raise CheckFailed(f"path family {g} -> {sp} fails fiber verification")
    all_types = set(lattice.partitions(nr, n))
    if reached != all_types:
        raise CheckFailed("specialization chain misses some types")
    return ({"edges": out, "types": sorted(map(list, reached), reverse=True)},
            [f"{','.join(map(str, e['generic']))} -> {','.join(map(str, e['special']))}"
             for e in out])


# ---------------------------------------------------------------------------
# ore

def cmd_ore(args):
    a = args.action
    if a == "orbit-dim":
        t = _type(args)
        d = ore.orbit_dimension(t, args.r if args.r_given else None)
        return {"type": list(t), "orbit_dimension": d}, [str(d)]
    if a == "stab-dim":
        t = _type(args)
        r = args.r if args.r_given else sum(t) // len(t)
        d = ore.stabilizer_dimension(t, r)
        return {"type": list(t), "stabilizer_dimension": d}, [str(d)]
    _require(args, "s", "rows")
    R = ore.ore_ring(_field(args), args.s)
    M = [[R.elem(c) for c in row] for row in args.rows]
    t = ore.ore_smith(R, M)
    return {"type": list(t)}, [",".join(map(str, t))]


# ---------------------------------------------------------------------------
# plin

def _plin_matrix(args, name="matrix"):
    _require(args, name)
    M = getattr(args, name)
    return tuple(tuple(int(x) for x in r) for r in M)


def cmd_plin(args):
    F = _field(args)
    a = args.action
    if a == "inverse":
        _require(args, "basis")
        n = args.n or int(round(len(args.basis[0]) ** 0.5))
        L = plin._plattice(F, n, [[int(x) for x in b] for b in args.basis])
        B = plin.nilpotent_of_lattice(L)
        return {"n": n, "rows": [list(r) for r in B]}, [str([list(r) for r in B])]
    B = _plin_matrix(args)
    if a == "nilpotent":
        ok = plin.is_p_nilpotent(F, B)
        return {"p_nilpotent": ok}, [str(ok).lower()]
    if a == "lattice":
        L = plin.lattice_of_nilpotent(F, B)
        return L.to_json(), [str(list(b)) for b in L.basis]
    if a == "conjugate":
        A = _plin_matrix(args, "A")
        C = plin.conjugate(F, B, A)
        lhs = plin.lattice_of_nilpotent(F, C).basis if plin.is_p_nilpotent(F, B) else None
        if lhs is not None:
            rhs = plin.act_lattice(plin.lattice_of_nilpotent(F, B), gf.mat_inv(F, A)).basis
            if lhs != rhs:
                raise CheckFailed("equivariance L(A phi A^-1) = L(phi) A^-1 fails")
        return {"n": len(C), "rows": [list(r) for r in C]}, [str([list(r) for r in C])]
    if a == "dual":
        rep = plin.orthogonality_report(F, B)
        tau = plin.dual_tau(F, B)
        n = len(B)
        images = [list(tau(tuple(1 if k == i else 0 for k in range(n)))) for i in range(n)]
        ok = rep["orthogonal"] and rep["complement_fp_dim"] == rep["tau_span_fp_dim"] \
            == rep["expected_fp_dim"]
        if not ok:
            raise CheckFailed("tau-complement is not the orthogonal complement")
        return rep | {"tau_of_basis": images}, [f"tau(e_i) = {images}", "orthogonal: true"]
    raise UsageError(a)


# ---------------------------------------------------------------------------
# rla

def cmd_rla(args):
    a = args.action
    if a == "jacobson":
        tab = rla.jacobson_polynomials(args.p)
        lines = [f"s_{i + 1} = " + " + ".join(f"{c}*{tab.word_str(w)}" for w, c in sorted(si.items()))
                 for i, si in enumerate(tab.s)]
        return tab.to_json(), lines
    if a == "check":
        ok = rla.restricted_check(args.p, args.trials, random.Random(args.seed), m=args.m)
        if not ok:
            raise CheckFailed("Jacobson identity fails")
        return {"p": args.p, "trials": args.trials, "ok": ok}, ["ok"]
    if a in ("model", "beta"):
        _require(args, "n")
        M = rla.build_ws_model(args.n, args.J, args.p, m=args.m)
        if a == "model":
            audits = {"antisymmetry": M.audit_antisymmetry(), "jacobi": M.audit_jacobi(),
                      "weights": M.audit_weights(), "restricted": M.audit_restricted()}
            bad = [k for k, v in audits.items() if not v]
            if bad:
                raise CheckFailed("model audit fails: " + ", ".join(bad))
            return (M.to_json() | {"audits": audits, "g0_pclosed": M.g0_pclosed()},
                    [f"dim {M.dim}", "audits pass", f"g0 closed under [p]: {M.g0_pclosed()}"])
        table = {}
        for k in M.g0_indices():
            y = rla.beta_map(M, M.unit(k))
            table[M.basis[k]] = [[c, M.basis[j]] for j, c in enumerate(y) if c]
        return {"beta": table}, [f"beta({k}) = {v}" for k, v in table.items()]
    if a == "canonical-weight":
        _require(args, "n")
        mixed, terms = rla.canonical_weight(args.n, args.r, args.p)
        eq, _ = rla.canonical_weight(args.n, args.r, args.p, "equal_char")
        return ({"mixed": mixed.c, "equal_char": eq.c, "filtration": list(terms)},
                [str(mixed.c), str(eq.c)])
    if a == "modular":
        _require(args, "n")
        R = witt.galois_ring(_field(args), args.n * args.r)
        rng = random.Random(args.seed)
        n = args.n
        for _ in range(args.trials):
            X, Y = rla.random_parabolic(R, rng, n), rla.random_parabolic(R, rng, n)
            u = tuple(R.mul_p(R.random(rng)) for _ in range(n - 1))
            lhs = rla.modular_action(R, rla._gr_mat_mul(R, X, Y), u)
            rhs = rla.modular_action(R, X, rla.modular_action(R, Y, u))
            if lhs != rhs:
                raise CheckFailed("group law (XY).u = X.(Y.u) fails")
            U, P = rla.parabolic_factor(R, X)
            if rla._gr_mat_mul(R, U, P) != X:
                raise CheckFailed("parabolic factorization does not reproduce X")
        return {"trials": args.trials, "ok": True}, ["group law and factorization hold"]
    raise UsageError(a)


# ---------------------------------------------------------------------------
# verify and atlas

def _run_check(name, seed):
    return checks.BY_NAME[name](seed=f"{seed}/{name}")


def cmd_verify(args):
    names = list(checks.BY_NAME) if args.action == "all" else [args.action]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_run_check, names, [args.seed] * len(names)))
    else:
        results = [_run_check(nm, args.seed) for nm in names]
    report = {"seed": args.seed, "version": __version__,
              "params": {"p": args.p, "m": args.m, "n": args.n, "r": args.r},
              "checks": [r.to_json() for r in results]}
    failed = [r for r in results if not r.passed]
    lines = [r.line() for r in results]
    if failed:
        return report, lines, "failing: " + ", ".join(f"{r.key} {r.title}" for r in failed)
    return report, lines


def atlas(n, r, F):
    nr = n * r
    types = list(lattice.partitions(nr, n))
    var_dim = (n - 1) * nr
    rows = []
    for t in types:
        od = ore.orbit_dimension(t, r)
        td = lattice.hom_dimension(lattice.diagonal_lattice(t, F, nr)) if nr else 0
        rows.append({"type": list(t), "orbit_dimension": od, "tangent_dimension": td,
                     "smooth": td == var_dim})
    smooth = [row["type"] for row in rows if row["smooth"]]
    if nr and smooth != [[nr] + [0] * (n - 1)]:
        raise CheckFailed("smooth locus is not the orbit of (nr, 0, ..., 0)")
    edges = []
    if n > 1:
        edge_json, _ = _deform(n, nr, F)
        edges = edge_json["edges"]
    counts, states = lattice.count_lattices_by_type(n, nr, F)
    return {"n": n, "r": r, "q": F.q, "variety_dimension": var_dim, "orbits": rows,
            "edges": edges, "point_counts": [[list(t), counts[t]] for t in types],
            "states": states}


def cmd_atlas(args):
    _require(args, "n")
    data = atlas(args.n, args.r, _field(args))
    lines = [f"variety dimension {data['variety_dimension']}"]
    lines += [f"{','.join(map(str, o['type']))}: orbit dim {o['orbit_dimension']}, tangent "
              f"{o['tangent_dimension']}, {'smooth' if o['smooth'] else 'singular'}"
              for o in data["orbits"]]
    lines += ["edge " + ",".join(map(str, e["generic"])) + " -> " + ",".join(map(str, e["special"]))
              for e in data["edges"]]
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write("digraph specialization {\n")
            for e in data["edges"]:
                fh.write(f'  "{",".join(map(str, e["generic"]))}" -> '
                         f'"{",".join(map(str, e["special"]))}";\n')
            fh.write("}\n")
    return data, lines


# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2)
    common.add_argument("--m", type=int, default=1)
    common.add_argument("--n", type=int)
    common.add_argument("--r", type=int)
    common.add_argument("--s", type=int)
    common.add_argument("--type")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out")
    common.add_argument("--json", action="store_true")

    parser = argparse.ArgumentParser(prog="wittkit", description="Witt-vector lattice toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="group", required=True)

    def group(name, actions, func):
        g = sub.add_parser(name, parents=[common])
        g.add_argument("action", choices=actions)
        g.set_defaults(func=func)
        return g

    g = group("witt", ["add", "mul", "digits", "log"], cmd_witt)
    g.add_argument("--a")
    g.add_argument("--b")
    g.add_argument("--value", type=int)

    g = group("lattice", ["smith", "canon", "member", "enumerate", "lie", "homdim", "deform",
                          "ci-check"], cmd_lattice)
    g.add_argument("--rows", type=_json_arg)
    g.add_argument("--vector", type=_json_arg)
    g.add_argument("--nr", type=int)
    g.add_argument("--colength", type=int)
    g.add_argument("--degenerate", action="store_true")

    g = group("ore", ["smith", "orbit-dim", "stab-dim"], cmd_ore)
    g.add_argument("--rows", type=_json_arg)

    g = group("plin", ["nilpotent", "lattice", "inverse", "conjugate", "dual"], cmd_plin)
    g.add_argument("--matrix", type=_json_arg)
    g.add_argument("--A", type=_json_arg)
    g.add_argument("--basis", type=_json_arg)

    g = group("rla", ["jacobson", "check", "model", "beta", "canonical-weight", "modular"],
              cmd_rla)
    g.add_argument("--J", type=int, default=2)

    group("verify", ["all"] + list(checks.BY_NAME), cmd_verify)

    g = sub.add_parser("atlas", parents=[common])
    g.add_argument("--dot")
    g.set_defaults(func=cmd_atlas, action="atlas")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args.r_given = args.r is not None
    if args.r is None:
        args.r = 1
    try:
        result = args.func(args)
    except RankDeficit as exc:
        print(f"wittkit: check failed: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ValueError, WittkitError) as exc:
        print(f"wittkit: error: {exc}", file=sys.stderr)
        return 2
    except CheckFailed as exc:
        print(f"wittkit: check failed: {exc}", file=sys.stderr)
        return 1
    data, lines = result[0], result[1]
    failure = result[2] if len(result) > 2 else None
    text = dumps(data) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.json:
        sys.stdout.write(text)
    else:
        for line in lines:
            print(line)
    if failure:
        print(f"wittkit: check failed: {failure}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
