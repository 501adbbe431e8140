#!/usr/bin/env python3
"""
evlab - command-line frontend for evasilab
Every subcommand prints one JSON document (sorted keys, compact) on stdout;
diagnostics go to stderr. Exit 0 on success, 1 when a theorem-backed check
fails, 2 on bad input.
"""

import argparse
import json
import logging
import sys
from dataclasses import replace
from fractions import Fraction

from boolfun import (
    BooleanFunction, decision_tree_complexity, enumerate_monotone_properties, make_property,
    property_to_function, validate_property,
)
from config import OUTPUT_FORMATS, load_config
from errors import BadShape, EvasiLabError
from hgraph import (
    clique_number, has_clique, hom_free_chi, named, orbital_paley_isomorphism, paley,
    paley_clique_check, weil_count_check,
)
from numth import (
    PartitionCertificate, SCHEMES, certificate_valid, dirichlet_max, dirichlet_prime, factor,
    is_prime, near_fermat_primes, next_prime, plan_chowla, plan_erh, plan_near_eva,
    plan_near_fermat, plan_uncond_sparse, verify_certificate, vinogradov_partition,
)
from perm import oliver_condition, u_orbitals
from scomplex import (
    dim_complex, euler_characteristic, fixed_point_complex, is_collapsible, read_binary,
    read_faces,
)
from verify import SUITE, build_group, reports_to_json, reports_to_tsv, run_all, write_reports

log = logging.getLogger("evlab")


def emit(obj):
    sys.stdout.write(json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str) + "\n")


def _json_arg(text):
    """Inline JSON, or @path to a JSON file."""
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return json.load(fh)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise BadShape(f"not valid JSON: {e}")


def _int_list(text):
    return [int(x) for x in text.split(",") if x.strip()] if text else []


def _load_complex(args):
    if getattr(args, "binary", None):
        return read_binary(args.binary)
    if not args.faces:
        raise BadShape("give --faces <file|-> or --binary <file>")
    return read_faces(args.faces)


def _function_from_args(args):
    if args.property:
        if args.n is None:
            raise BadShape("--property needs --n")
        return property_to_function(make_property(args.property, args.n))
    if args.vars is None:
        raise BadShape("give --property NAME --n N, or --vars N with --table/--function")
    if args.table:
        return BooleanFunction(args.vars, int(args.table, 16))
    builders = {"and": BooleanFunction.and_, "or": BooleanFunction.or_,
                "parity": BooleanFunction.parity}
    if args.function not in builders:
        raise BadShape(f"--function must be one of {sorted(builders)}")
    return builders[args.function](args.vars)


## ── Subcommand handlers ─────────────────────────────────────

def cmd_dtc(args, config):
    f = _function_from_args(args)
    result = decision_tree_complexity(f, config.dtc_budget, certificate=args.certificate,
                                      memo_key=config.memo_key)
    out = {"D": result.value, "N": f.n_vars, "evasive": result.value == f.n_vars}
    if args.certificate:
        out["adversary"] = result.adversary
    return out


def cmd_evasive(args, config):
    f = _function_from_args(args)
    out = {"N": f.n_vars,
           "evasive": decision_tree_complexity(f, config.dtc_budget,
                                               memo_key=config.memo_key).value == f.n_vars}
    if args.property and args.validate:
        validate_property(make_property(args.property, args.n), seed=config.seed)
        out["validated"] = True
    return out


def cmd_group(args, config):
    G = build_group(_json_arg(args.spec))
    out = G.to_dict()
    if args.order:
        out["order"] = G.order(config.enum_cap)
    if args.oliver:
        cert = oliver_condition(G, hint="auto" if G.oliver_hint else None, enum_cap=config.enum_cap)
        out["oliver"] = cert.to_dict() if cert else None
    return out


def cmd_orbitals(args, config):
    report = u_orbitals(build_group(_json_arg(args.spec)))
    if args.format == "tsv":
        sys.stdout.write("\n".join("\t".join(str(c) for c in row) for row in report.tsv_rows()) + "\n")
        return None
    return report.to_dict()


def cmd_chi(args, config):
    if args.hom_free:
        return {"chi": hom_free_chi(args.r, named(args.hom_free), config.workers)}
    K = _load_complex(args)
    out = {"chi": euler_characteristic(K)}
    if args.dim:
        out["dim"] = dim_complex(K)
    return out


def cmd_fixed_complex(args, config):
    K = _load_complex(args)
    G = build_group(_json_arg(args.group))
    return fixed_point_complex(K, G, config.max_orbits, args.strategy).to_dict()


def cmd_collapse(args, config):
    outcome = is_collapsible(_load_complex(args), args.budget)
    if outcome.collapsible:
        return {"collapsible": True, "pairs": outcome.pairs}
    return {"collapsible": False, "remaining": outcome.remaining, "exhausted": outcome.exhausted}


def cmd_paley(args, config):
    if args.h is not None:
        return paley_clique_check(args.q, args.d, args.h)
    if args.orbitals:
        return {"q": args.q, "d": args.d, "orbitals": orbital_paley_isomorphism(args.q, args.d)}
    G = paley(args.q, args.d)
    out = {"q": args.q, "d": args.d, "degree": len(G.neighbors(0))}
    if hasattr(G, "to_graph6"):
        out["graph6"] = G.to_graph6()
        out["clique_number"] = clique_number(G)
    return out


def cmd_weil(args, config):
    return weil_count_check(args.q, args.l, _int_list(args.a))


def cmd_clique(args, config):
    if args.q is not None:
        G = paley(args.q, args.d)
    else:
        G = named(args.graph)
    if args.h is None:
        return {"clique_number": clique_number(G)}
    return {"h": args.h, "clique": has_clique(G, args.h)}


def cmd_primes(args, config):
    action = args.action
    if action == "is-prime":
        return {"n": args.n, "prime": is_prime(args.n)}
    if action == "next-prime":
        return {"n": args.n, "next": next_prime(args.n)}
    if action == "factor":
        return {"n": args.n, "factors": {str(p): e for p, e in factor(args.n).items()}}
    if action == "dirichlet":
        if args.a is None:
            return {"m": args.m, "max": dirichlet_max(args.m, config.prime_cap)}
        return {"m": args.m, "a": args.a, "prime": dirichlet_prime(args.m, args.a, config.prime_cap)}
    if action == "near-fermat":
        return near_fermat_primes(Fraction(args.eps), args.limit)
    if action == "vinogradov":
        part = vinogradov_partition(args.k)
        return {"k": part.k, "primes": list(part.primes),
                "delta": None if part.delta is None else str(part.delta)}
    raise BadShape(f"unknown primes action {action!r}")


_PLANNERS = {
    "near_eva": lambda a: plan_near_eva(a.n, named(a.H)),
    "near_fermat": lambda a: plan_near_fermat(a.n, named(a.H)),
    "uncond_sparse": lambda a: plan_uncond_sparse(a.n),
    "erh": lambda a: plan_erh(a.n, Fraction(a.eps) if a.eps else Fraction(1, 20)),
    "chowla": lambda a: plan_chowla(a.n, Fraction(a.delta) if a.delta else Fraction(1, 10)),
}


def cmd_partition(args, config):
    if args.check:
        cert = PartitionCertificate.from_dict(_json_arg(args.check))
        return {"valid": certificate_valid(cert), "checks": verify_certificate(cert)}
    if args.scheme not in _PLANNERS:
        raise BadShape(f"unknown scheme {args.scheme!r}; known: {sorted(SCHEMES)}")
    if args.n is None:
        raise BadShape("--n is required")
    if args.scheme == "erh" and args.eps is None:
        args.eps = str(config.erh_eps)
    if args.scheme == "chowla" and args.delta is None:
        args.delta = str(config.chowla_delta)
    return _PLANNERS[args.scheme](args).to_dict()


def cmd_verify(args, config):
    only = None if args.check == "all" else [args.check]
    if args.ark_n is not None:
        config = replace(config, ark_n=args.ark_n).validate()
    reports = run_all(config, only)
    fmt = args.format or config.output_format
    if args.out:
        write_reports(reports, args.out, None if args.out.endswith((".xlsx", ".tsv", ".json")) else fmt,
                      args.timings)
    if fmt == "tsv":
        sys.stdout.write(reports_to_tsv(reports, args.timings))
    else:
        sys.stdout.write(reports_to_json(reports, args.timings) + "\n")
    failed = [r.check_id for r in reports if r.failed_theorem()]
    if failed:
        log.error("theorem-backed checks failed: %s", ", ".join(failed))
        return 1
    return None


def cmd_enumerate_properties(args, config):
    rows = []
    for spec in enumerate_monotone_properties(args.n, config.property_cap):
        row = {"name": spec.name, "trivial": spec.trivial}
        if args.dtc and not spec.trivial:
            row["D"] = decision_tree_complexity(property_to_function(spec), config.dtc_budget,
                                                memo_key=config.memo_key).value
        rows.append(row)
    return {"n": args.n, "count": len(rows), "properties": rows}


## ── Parser ──────────────────────────────────────────────────

def _function_options(p):
    p.add_argument("--property", help="triangle-free, forbid:<graph6>, max-edges:<m>, ...")
    p.add_argument("--n", type=int, help="vertex count for --property")
    p.add_argument("--vars", type=int, help="variable count for --table/--function")
    p.add_argument("--table", help="truth table as hex")
    p.add_argument("--function", help="and, or, parity")


def _complex_options(p):
    p.add_argument("--faces", help="face-list file, one JSON list per line; - for stdin")
    p.add_argument("--binary", help="EVSC bitmask file")


def build_parser():
    parser = argparse.ArgumentParser(prog="evlab", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--config", help="dotenv or .json config file")
    parser.add_argument("--verbose", "-v", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dtc", help="exact decision-tree complexity")
    _function_options(p)
    p.add_argument("--certificate", action="store_true", help="include an adversary strategy")
    p.set_defaults(handler=cmd_dtc)

    p = sub.add_parser("evasive", help="is D(f) = N")
    _function_options(p)
    p.add_argument("--validate", action="store_true", help="also check invariance and monotonicity")
    p.set_defaults(handler=cmd_evasive)

    p = sub.add_parser("group", help="build a permutation group from a JSON spec")
    p.add_argument("spec", help='e.g. {"kind":"gamma_qd","q":7,"d":2} or @file.json')
    p.add_argument("--order", action="store_true")
    p.add_argument("--oliver", action="store_true", help="search for an Oliver certificate")
    p.set_defaults(handler=cmd_group)

    p = sub.add_parser("orbitals", help="u-orbitals of a group")
    p.add_argument("spec")
    p.add_argument("--format", choices=["json", "tsv"], default="json")
    p.set_defaults(handler=cmd_orbitals)

    p = sub.add_parser("chi", help="Euler characteristic")
    _complex_options(p)
    p.add_argument("--dim", action="store_true")
    p.add_argument("--hom-free", metavar="H", help="χ(Q_r^[[H]]) for a named graph or graph6")
    p.add_argument("--r", type=int, default=4)
    p.set_defaults(handler=cmd_chi)

    p = sub.add_parser("fixed-complex", help="fixed-point complex K_Γ")
    _complex_options(p)
    p.add_argument("--group", required=True, help="group JSON spec")
    p.add_argument("--strategy", choices=["grow", "scan"], default="grow")
    p.set_defaults(handler=cmd_fixed_complex)

    p = sub.add_parser("collapse", help="search for an elementary collapse sequence")
    _complex_options(p)
    p.add_argument("--budget", type=int, default=200_000)
    p.set_defaults(handler=cmd_collapse)

    p = sub.add_parser("paley", help="generalized Paley graph P(q,d)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--h", type=int, help="run the clique check for K_h")
    p.add_argument("--orbitals", action="store_true", help="check the Γ(q,d) orbitals against P(q,d)")
    p.set_defaults(handler=cmd_paley)

    p = sub.add_parser("weil", help="count x with every a_i + x in C_{(q-1)/l}")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--a", default="", help="comma-separated shifts")
    p.set_defaults(handler=cmd_weil)

    p = sub.add_parser("clique", help="clique search")
    p.add_argument("--graph", default="K3", help="K5, C5, petersen or graph6")
    p.add_argument("--q", type=int, help="use P(q,d) instead of --graph")
    p.add_argument("--d", type=int)
    p.add_argument("--h", type=int)
    p.set_defaults(handler=cmd_clique)

    p = sub.add_parser("primes", help="number-theory utilities")
    p.add_argument("action", choices=["is-prime", "next-prime", "factor", "dirichlet",
                                      "near-fermat", "vinogradov"])
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--eps", default="1/4")
    p.add_argument("--limit", type=int, default=1000)
    p.set_defaults(handler=cmd_primes)

    p = sub.add_parser("partition", help="plan or check a partition certificate")
    p.add_argument("scheme", nargs="?", default="near_eva", help=", ".join(sorted(SCHEMES)))
    p.add_argument("--n", type=int)
    p.add_argument("--h", "--H", dest="H", default="K3", help="forbidden graph (name or graph6)")
    p.add_argument("--eps")
    p.add_argument("--delta")
    p.add_argument("--check", help="certificate JSON (or @file) to re-verify")
    p.set_defaults(handler=cmd_partition)

    p = sub.add_parser("verify", help="run verification checks")
    p.add_argument("check", nargs="?", default="all", choices=["all"] + sorted(SUITE))
    p.add_argument("--out", help="also write the reports (.json, .tsv or .xlsx)")
    p.add_argument("--format", choices=sorted(OUTPUT_FORMATS))
    p.add_argument("--timings", action="store_true", help="include runtime_ms")
    p.add_argument("--ark-n", type=int, help="vertex count for ark_exhaustive (5 needs a budget)")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("enumerate-properties", help="monotone graph properties on [n]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dtc", action="store_true", help="attach D to each nontrivial property")
    p.set_defaults(handler=cmd_enumerate_properties)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config)
        result = args.handler(args, config)
    except EvasiLabError as e:
        sys.stderr.write(f"evlab: {e.__class__.__name__}: {e}\n")
        return 2
    except OSError as e:
        sys.stderr.write(f"evlab: {e}\n")
        return 2
    if isinstance(result, int):
        return result
    if result is not None:
        emit(result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
