import argparse
import logging
import time
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from arith.cyclotomic_service import get_cyclotomic_service
from arith.factor_service import get_factor_service
from arith.order_service import get_order_service
from census.census_service import get_census_service
from census.density_service import get_density_service
from cli.formatters import FORMATS, render, to_plain
from codes.code_service import get_code_service
from codes.difference_set_service import get_difference_set_service
from common.errors import DomainError, NotADifferenceSetError, SizeError
from config.settings import configure
from gf2poly.factor_service import get_gf2_factor_service
from models.command import CommandResult, CommandStatus
from primes.classify_service import get_prime_class_service
from primes.exchange_service import get_exchange_service
from sequences.sequence_service import get_sequence_service
from tableaux.tableau_service import format_tableau, get_tableau_service

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace], Any]
Argument = Tuple[Tuple[str, ...], Dict[str, Any]]


def arg(*flags: str, **kwargs) -> Argument:
    return flags, kwargs


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


class CommandRouter:
    """Subcommand registry; a space in the command name nests a sub-subcommand"""

    def __init__(self, prog: str = "vos"):
        self.prog = prog
        self._commands: Dict[str, Tuple[Handler, str, List[Argument], Optional[Callable[[Any], str]]]] = {}

    def command(self, name: str, *arguments: Argument, help: str = "", text: Optional[Callable[[Any], str]] = None):
        def decorator(fn: Handler) -> Handler:
            self._commands[name] = (fn, help, list(arguments), text)
            return fn

        return decorator

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(prog=self.prog, description="Very odd sequences and the order of 2")
        parser.add_argument("--format", choices=FORMATS, default="json")
        parser.add_argument("--config", default=None, help="key=value settings file")
        parser.add_argument("--threads", type=int, default=None)
        groups: Dict[str, argparse._SubParsersAction] = {"": parser.add_subparsers(dest="command", required=True)}
        for name, (fn, help_text, arguments, _) in self._commands.items():
            head, _, leaf = name.rpartition(" ")
            if head and head not in groups:
                group = groups[""].add_parser(head, help=f"{head} subcommands")
                groups[head] = group.add_subparsers(dest="action", required=True)
            sub = groups[head].add_parser(leaf, help=help_text)
            for flags, kwargs in arguments:
                sub.add_argument(*flags, **kwargs)
            sub.set_defaults(_command=name)
        return parser

    def text_renderer(self, name: str) -> Optional[Callable[[Any], str]]:
        return self._commands[name][3]

    def dispatch(self, args: argparse.Namespace) -> Any:
        return self._commands[args._command][0](args)


routes = CommandRouter()


def _sequences():
    return get_sequence_service()


@routes.command("check", arg("bits"), help="autocorrelation profile and very-odd test")
def check(args):
    svc = _sequences()
    profile = svc.autocorrelation_profile(args.bits)
    return {"bits": args.bits, "very_odd": svc.is_very_odd(args.bits), "A": profile.values}


@routes.command("count", arg("n", type=int), help="S(n)", text=lambda p: str(p["value"]))
def count(args):
    return _sequences().count(args.n)


@routes.command("enumerate", arg("n", type=int), arg("--cap", type=int, default=None), help="all very odd sequences of length n")
def enumerate_sequences(args):
    return [s.bits for s in _sequences().enumerate_vos(args.n, args.cap)]


@routes.command("tensor", arg("a"), arg("b"), help="tensor product of two very odd sequences", text=lambda p: p["bits"])
def tensor(args):
    s = _sequences().tensor(args.a, args.b)
    return {"bits": s.bits, "length": s.length}


@routes.command("i2", arg("m", type=int), arg("--q", type=int, default=2), help="irreducible factors of X^m - 1 over GF(q)", text=lambda p: str(p["count"]))
def irreducible_count(args):
    return {"q": args.q, "m": args.m, "count": get_cyclotomic_service().irreducible_count(args.q, args.m)}


@routes.command("rank", arg("--q", type=int, required=True), arg("--d", type=int, required=True), help="rank formula value")
def rank(args):
    return get_cyclotomic_service().ulmer_record(args.q, args.d)


@routes.command("stufe", arg("m", type=int), help="level of the m-th cyclotomic field")
def stufe(args):
    return {"m": args.m, "level": get_cyclotomic_service().stufe_level(args.m)}


@routes.command("code", arg("n", type=int), arg("--min-distance", action="store_true"), help="self-dual code from a very odd sequence")
def code(args):
    s = _sequences().first_vos(args.n)
    if s is None:
        raise DomainError(f"no very odd sequence of length {args.n}")
    svc = get_code_service()
    built = svc.build_self_dual_code(s)
    if args.min_distance:
        return {"sequence": s.bits, "properties": svc.code_properties(built)}
    return {
        "sequence": s.bits,
        "length": built.length,
        "dimension": built.dimension,
        "self_dual": svc.is_self_orthogonal(built),
        "rows": built.rows_hex(),
    }


@routes.command(
    "ds-verify",
    arg("--n", type=int, required=True),
    arg("--set", dest="residues", type=_int_list, required=True),
    arg("--sequence", action="store_true", help="also derive the very odd sequence"),
    help="verify a cyclic difference set",
)
def ds_verify(args):
    svc = get_difference_set_service()
    witness = svc.verify_difference_set(args.residues, args.n)
    out: Dict[str, Any] = {"witness": witness}
    if args.sequence:
        out["sequence"] = svc.difference_set_sequence(witness).bits
    return out


@routes.command("factor", arg("n", type=int), help="prime factorization", text=lambda p: p["text"])
def factor(args):
    fac = get_factor_service().factorize(args.n)
    return {"n": args.n, "factors": fac.factors, "text": str(fac)}


@routes.command("order", arg("a", type=int), arg("m", type=int), help="multiplicative order of a modulo m")
def order(args):
    return get_order_service().order_record(args.a, args.m)


@routes.command("cosets", arg("m", type=int), help="2-cyclotomic cosets modulo m")
def cosets(args):
    return get_gf2_factor_service().cyclotomic_cosets(args.m)


@routes.command("factor-cyclic", arg("m", type=int), help="irreducible factors of X^m + 1 over GF(2), hex")
def factor_cyclic(args):
    return [{"degree": d, "factors": [f.to_hex() for f in fs]} for d, fs in get_gf2_factor_service().factor_cyclic(args.m)]


@routes.command("prime", arg("p", type=int), help="order class of an odd prime")
def prime(args):
    return get_prime_class_service().classify_prime(args.p)


@routes.command("pm", arg("m", type=int), arg("--x", type=int, required=True), help="members of P_m up to x")
def pm(args):
    members = get_prime_class_service().pm_members(args.m, args.x)
    return {"m": args.m, "x": args.x, "count": len(members), "members": members}


@routes.command("wieferich", arg("--x", type=int, required=True), help="Wieferich primes up to x")
def wieferich(args):
    return get_prime_class_service().wieferich_scan(args.x)


@routes.command("exchange", arg("p", type=int), arg("q", type=int), arg("m", type=int), help="prime exchange hypotheses")
def exchange(args):
    cyclotomic = get_cyclotomic_service()
    return {
        "hypotheses": get_exchange_service().exchange_hypotheses(args.p, args.q, args.m),
        "i2_pm": cyclotomic.irreducible_count(2, args.p * args.m),
        "i2_qm": cyclotomic.irreducible_count(2, args.q * args.m),
    }


@routes.command("tableau value", arg("tableau"), help="value of a tableau", text=lambda p: str(p["value"]))
def tableau_value(args):
    svc = get_tableau_service()
    t = svc.parse_tableau(args.tableau)
    return {"tableau": str(t), "value": svc.tableau_value(t)}


@routes.command("tableau enumerate", arg("r", type=int), arg("--generalized", action="store_true"), help="solution tableaux of value r")
def tableau_enumerate(args):
    return [format_tableau(t) for t in get_tableau_service().enumerate_solution_tableaux(args.r, args.generalized)]


@routes.command("tableau realize", arg("tableau"), arg("--bound", type=int, default=None), help="smallest primes realizing a tableau")
def tableau_realize(args):
    svc = get_tableau_service()
    t = svc.parse_tableau(args.tableau)
    primes = svc.realize_tableau(t, args.bound)
    if primes is None:
        return None
    m = 1
    for p in primes:
        m *= p
    return {"tableau": str(t), "primes": list(primes), "m": m, "i2": get_cyclotomic_service().irreducible_count(2, m)}


@routes.command("tableau of", arg("m", type=int), help="tableau of an odd integer", text=lambda p: p["tableau"])
def tableau_of(args):
    return {"m": args.m, "tableau": str(get_tableau_service().tableau_of(args.m))}


@routes.command("stats", arg("e", type=int), arg("--bound", type=int, default=None), help="omega statistics for S(n) = 2^e")
def stats(args):
    return get_tableau_service().max_omega_stats(args.e, args.bound)


@routes.command("census", arg("--x", type=int, required=True), arg("--values", type=_int_list, default=None), help="N(x) or N_v(x)")
def census(args):
    svc = get_census_service()
    if args.values:
        return svc.value_census(args.x, args.values)
    return svc.ord_parity_sieve(args.x)


@routes.command("stufe-census", arg("--x", type=int, required=True), help="St_4(x) against N(x)")
def stufe_census(args):
    return get_census_service().stufe_census(args.x)


@routes.command("density pm", arg("m", type=int), help="density of P_m")
def density_pm(args):
    return get_density_service().pm_density(args.m)


_CLASS_ARGUMENTS = (
    arg("--e", type=int, required=True),
    arg("--a", type=int, required=True),
    arg("--f", type=int, required=True),
    arg("--truncation", type=int, default=None),
)


@routes.command("density thm3", *_CLASS_ARGUMENTS, help="density of r_2(p) = 2e in a residue class")
@routes.command("density class", *_CLASS_ARGUMENTS, help="same as density thm3")
def density_class(args):
    return get_density_service().residue_class_density(args.e, args.a, args.f, args.truncation)


@routes.command("density artin", arg("--precision", type=float, default=1e-9), arg("--direct", action="store_true"), help="Artin constant")
def density_artin(args):
    return get_density_service().artin_constant(args.precision, not args.direct)


def _error_payload(exc: Exception) -> Dict[str, Any]:
    out: Dict[str, Any] = {"error": str(exc), "type": type(exc).__name__}
    if isinstance(exc, SizeError):
        out.update(count=exc.count, exponent=exc.exponent)
    if isinstance(exc, NotADifferenceSetError):
        out.update(residue=exc.residue, occurrences=exc.occurrences)
    return out


def _execute(argv: Sequence[str], router: CommandRouter) -> Tuple[Optional[argparse.Namespace], CommandResult]:
    parser = router.build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        if e.code == 0:
            return None, CommandResult(status=CommandStatus.OK)
        return None, CommandResult(status=CommandStatus.DOMAIN_ERROR, payload={"error": "usage", "usage": parser.format_usage()})

    if args.config or args.threads:
        configure(args.config, VOS_THREADS=args.threads)
    started = time.perf_counter()
    try:
        payload = router.dispatch(args)
        status = CommandStatus.OK if payload is not None else CommandStatus.NOT_FOUND
    except (DomainError, ValidationError) as e:
        logger.warning(f"[CLI] {args._command}: {e}")
        status, payload = CommandStatus.DOMAIN_ERROR, _error_payload(e)
    except SizeError as e:
        logger.warning(f"[CLI] {args._command}: {e}")
        status, payload = CommandStatus.SIZE_ERROR, _error_payload(e)
    elapsed = (time.perf_counter() - started) * 1000
    logger.info(f"[CLI] {args._command} finished with {status.value} in {elapsed:.1f} ms")
    return args, CommandResult(status=status, payload=payload, timing_ms=elapsed)


def run(argv: Sequence[str], router: CommandRouter = routes) -> CommandResult:
    return _execute(argv, router)[1]


def main(argv: Sequence[str], router: CommandRouter = routes) -> int:
    """Run one command, print its payload and return the exit code"""
    try:
        args, result = _execute(argv, router)
    except Exception as e:
        logger.error(f"[CLI] unexpected failure: {e}", exc_info=True)
        print(render({"error": str(e), "type": type(e).__name__}))
        return 1
    fmt = args.format if args is not None else "json"
    if result.status == CommandStatus.NOT_FOUND:
        print(render({"status": result.status.value}, fmt))
    elif result.payload is not None:
        renderer = router.text_renderer(args._command) if args is not None and fmt == "text" else None
        if renderer and result.status == CommandStatus.OK:
            print(renderer(to_plain(result.payload)))
        else:
            print(render(result.payload, fmt))
    return result.exit_code
