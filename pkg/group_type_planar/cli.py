"""Command line: load a context, run one command, print text or JSON.

Exit status is 0 on success, 1 when a check fails and 2 on bad input.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel, ValidationError, model_validator

from group_type_planar import __version__
from group_type_planar.algebra import AlgebraElement, PlanarAlgebra
from group_type_planar.commutants import CommutantModel
from group_type_planar.config import (
    Backend,
    ConfigError,
    EngineSettings,
    OutputFormat,
    PlanarAlgebraError,
    SuiteName,
    TangleKind,
    configure_logging,
)
from group_type_planar.groups import FiniteGroup, GroupContext, Side, Word
from group_type_planar.statesum import calibrate_critical_weights
from group_type_planar.tangles import library, load_tangle, to_text, validate
from group_type_planar.verify import VerificationRunner

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = Path(__file__).parent / "configs" / "context_a_s3.json"


# context schema


class PermutationSpec(BaseModel):
    degree: int
    generators: List[List[int]] = []


class GroupSpec(BaseModel):
    elements: Optional[List[str]] = None
    cayley: Optional[List[List[str]]] = None
    permutations: Optional[PermutationSpec] = None

    @model_validator(mode="after")
    def _one_form(self) -> "GroupSpec":
        tabled = self.elements is not None or self.cayley is not None
        if tabled == (self.permutations is not None):
            raise ValueError("give either 'elements' with 'cayley', or 'permutations'")
        if tabled and (self.elements is None or self.cayley is None):
            raise ValueError("'elements' and 'cayley' must be given together")
        return self

    def build(self, label: str) -> FiniteGroup:
        if self.permutations is not None:
            return FiniteGroup.from_permutations(
                self.permutations.degree, self.permutations.generators, label=label
            )
        index = {name: i for i, name in enumerate(self.elements)}
        table = []
        for r, row in enumerate(self.cayley):
            try:
                table.append([index[name] for name in row])
            except KeyError as e:
                raise ConfigError(f"unknown element {e.args[0]!r}", field=f"{label}.cayley[{r}]") from None
        return FiniteGroup(self.elements, table, label=label)


class AmbientSpec(BaseModel):
    mode: Backend = Backend.CONCRETE
    G: Optional[GroupSpec] = None
    embedH: Optional[Dict[str, str]] = None
    embedK: Optional[Dict[str, str]] = None
    max_length: Optional[int] = None

    @model_validator(mode="after")
    def _concrete_needs_g(self) -> "AmbientSpec":
        if self.mode is Backend.CONCRETE and (self.G is None or self.embedH is None or self.embedK is None):
            raise ValueError("concrete mode needs 'G', 'embedH' and 'embedK'")
        return self


class ContextSpec(BaseModel):
    name: str = "context"
    H: GroupSpec
    K: GroupSpec
    ambient: AmbientSpec


def _embedding(mapping: Dict[str, str], source: FiniteGroup, target: FiniteGroup, field_name: str) -> List[int]:
    missing = [name for name in source.names if name not in mapping]
    if missing:
        raise ConfigError(f"no image for {missing}", field=field_name)
    return [target.index(mapping[name]) for name in source.names]


def build_context(spec: ContextSpec, settings: Optional[EngineSettings] = None) -> GroupContext:
    settings = settings or EngineSettings()
    H = spec.H.build("H")
    K = spec.K.build("K")
    ambient = spec.ambient
    if ambient.mode is Backend.FREE_PRODUCT:
        max_length = ambient.max_length or settings.free_product_max_length
        return GroupContext.free_product(H, K, max_length, name=spec.name)
    G = ambient.G.build("G")
    return GroupContext.concrete(
        G,
        H,
        K,
        _embedding(ambient.embedH, H, G, "ambient.embedH"),
        _embedding(ambient.embedK, K, G, "ambient.embedK"),
        name=spec.name,
    )


def load_context(path, settings: Optional[EngineSettings] = None) -> GroupContext:
    """Read and validate a context JSON file."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as e:
        raise ConfigError(str(e), field=str(path)) from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"line {e.lineno}, column {e.colno}: {e.msg}", field=str(path)) from None
    try:
        spec = ContextSpec.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ConfigError(first["msg"], field=location) from None
    ctx = build_context(spec, settings)
    logger.info(f"Loaded context {ctx!r} from {path}")
    return ctx


# commands


@dataclass
class CommandResult:
    payload: Dict[str, Any]
    lines: List[str] = field(default_factory=list)
    status: int = 0


class CommandHandler:
    """Runs one command against a loaded context."""

    def __init__(self, ctx: GroupContext, settings: EngineSettings):
        self.ctx = ctx
        self.settings = settings
        self.algebra = PlanarAlgebra(ctx, settings)
        self._model: Optional[CommutantModel] = None

    @property
    def model(self) -> CommutantModel:
        if self._model is None:
            self._model = CommutantModel(self.algebra)
        return self._model

    def dispatch(self, command: str, args: argparse.Namespace) -> CommandResult:
        handler = getattr(self, f"_handle_{command.replace('-', '_')}", None)
        if handler is None:
            raise ConfigError(f"unknown command {command!r}")
        return handler(args)

    def _level(self, n: int) -> int:
        if not 0 <= n <= self.settings.max_level:
            raise ConfigError(f"level {n} is outside 0..{self.settings.max_level} (raise --max-n)", field="n")
        return n

    def _word(self, n: int, text: str) -> Word:
        word = self.ctx.parse_word(text)
        if len(word) != 2 * n:
            raise ConfigError(f"{text!r} has {len(word)} letters, level {n} needs {2 * n}", field="word")
        return word

    def _element(self, n: int, text: str) -> AlgebraElement:
        return self.algebra.basis_element(self._word(self._level(n), text))

    @staticmethod
    def _show(label: str, x: AlgebraElement) -> List[str]:
        return [f"{label} = {x.to_text()}"]

    def _handle_dims(self, args) -> CommandResult:
        dims = [len(self.ctx.enumerate_basis(n)) for n in range(self.settings.max_level + 1)]
        lines = ["n  dim P_n"] + [f"{n}  {d}" for n, d in enumerate(dims)]
        return CommandResult({"dims": dims}, lines)

    def _handle_basis(self, args) -> CommandResult:
        words = self.ctx.enumerate_basis(self._level(args.n))
        formatted = [self.ctx.format_word(w) for w in words]
        return CommandResult({"level": args.n, "basis": formatted}, formatted)

    def _handle_mul(self, args) -> CommandResult:
        x = self._element(args.n, args.x)
        y = self._element(args.n, args.y)
        product = self.algebra.mult(x, y)
        return CommandResult({"product": product.to_dict()}, self._show("x * y", product))

    def _handle_star(self, args) -> CommandResult:
        x = self.algebra.star(self._element(args.n, args.x))
        return CommandResult({"star": x.to_dict()}, self._show("x*", x))

    def _handle_include(self, args) -> CommandResult:
        x = self._element(args.n, args.x)
        if args.n + 1 > self.settings.max_level:
            raise ConfigError(f"include lands in level {args.n + 1}, above --max-n", field="n")
        included = self.algebra.include(x)
        return CommandResult({"include": included.to_dict()}, self._show("include(x)", included))

    def _handle_jones(self, args) -> CommandResult:
        self._level(args.n + 1)
        value = self.algebra.jones(args.n)
        lines = self._show(f"jones({args.n})", value) + [f"delta = {self.algebra.delta.to_text()}"]
        return CommandResult({"jones": value.to_dict(), "delta": self.algebra.delta.to_dict()}, lines)

    def _handle_expect_right(self, args) -> CommandResult:
        x = self._element(args.n, args.x)
        value = self.algebra.cond_exp_right(x)
        expectation = self.algebra.expect_right(x)
        lines = self._show("tangle value", value) + self._show("expectation", expectation)
        return CommandResult({"tangle_value": value.to_dict(), "expectation": expectation.to_dict()}, lines)

    def _handle_expect_left(self, args) -> CommandResult:
        x = self._element(args.n, args.x)
        value = self.algebra.cond_exp_left(x)
        expectation = self.algebra.expect_left(x)
        lines = self._show("tangle value", value) + self._show("expectation", expectation)
        return CommandResult({"tangle_value": value.to_dict(), "expectation": expectation.to_dict()}, lines)

    def _handle_trace(self, args) -> CommandResult:
        value = self.algebra.trace(self._element(args.n, args.x))
        return CommandResult({"trace": value.to_dict()}, [f"tr = {value.to_text()}"])

    def _handle_gram(self, args) -> CommandResult:
        n = self._level(args.n)
        matrix = self.algebra.gram(n)
        eigenvalues = self.algebra.gram_eigenvalues(n)
        lowest = float(eigenvalues.min()) if eigenvalues.size else 0.0
        ok = lowest >= -self.settings.gram_tolerance
        lines = ["  ".join(c.to_text() for c in row) for row in matrix]
        lines.append(f"smallest eigenvalue: {lowest:.6g}")
        payload = {
            "level": n,
            "matrix": [[c.to_dict() for c in row] for row in matrix],
            "eigenvalues": [float(v) for v in eigenvalues],
            "positive_semidefinite": ok,
        }
        return CommandResult(payload, lines, 0 if ok else 1)

    def _handle_eval(self, args) -> CommandResult:
        tangle = load_tangle(args.tangle)
        geometry = validate(tangle)
        inputs = {}
        for item in args.input or []:
            disc, sep, text = item.partition("=")
            if not sep:
                raise ConfigError(f"expected D=word, got {item!r}", field="--input")
            if disc not in geometry.disc_colors:
                raise ConfigError(f"tangle has no disc {disc!r}", field="--input")
            inputs[disc] = self._word(geometry.disc_colors[disc], text)
        value = self.algebra.evaluator.evaluate(tangle, inputs, geometry)
        lines = self._show("Z", value) + [f"{k}: {v}" for k, v in geometry.summary().items()]
        return CommandResult({"value": value.to_dict(), "geometry": geometry.summary()}, lines)

    def _handle_tangle(self, args) -> CommandResult:
        tangle = library.structural_tangle(TangleKind(args.kind), args.n)
        summary = validate(tangle).summary()
        text = to_text(tangle)
        return CommandResult({"tangle": text, "geometry": summary}, text.splitlines())

    def _handle_commutant_dims(self, args) -> CommandResult:
        rows = []
        for n in range(self.settings.max_level):
            rows.append({
                "n": n,
                "ncomm": len(self.model.ncomm_basis(n)),
                "mcomm": len(self.model.mcomm_basis(n)) if n >= 1 else 1,
                "dim_P_n+1": len(self.ctx.enumerate_basis(n + 1)),
            })
        lines = ["n  N'∩M_n  M'∩M_n  P_n+1"] + [
            f"{r['n']}  {r['ncomm']}  {r['mcomm']}  {r['dim_P_n+1']}" for r in rows
        ]
        status = 0 if all(r["ncomm"] == r["dim_P_n+1"] for r in rows) else 1
        return CommandResult({"commutant_dims": rows}, lines, status)

    def _handle_iso_check(self, args) -> CommandResult:
        self._level(args.n + 1)
        report = self.model.verify_iso(args.n)
        lines = [f"psi_{args.n}: N'∩M_{args.n} -> P_{args.n + 1}"]
        for name, ok in report.checks.items():
            line = f"  {name}: {'ok' if ok else 'FAILED'}"
            if not ok:
                line += f" ({report.counterexamples[name]})"
            lines.append(line)
        return CommandResult(report.to_dict(), lines, 0 if report.passed else 1)

    def _handle_verify(self, args) -> CommandResult:
        runner = VerificationRunner(self.algebra, self.settings)
        reports = runner.run(SuiteName(args.suite))
        lines = []
        for report in reports:
            lines.append(f"{report.suite}: {'PASS' if report.passed else 'FAIL'} ({len(report.checks)} checks)")
            if report.error:
                lines.append(f"  error: {report.error}")
            for check in report.failures():
                lines.append(f"  {check.name}: {check.counterexample}")
        payload = {
            "context": self.ctx.name,
            "max_level": self.settings.max_level,
            "seed": self.settings.seed,
            "reports": [r.to_dict() for r in reports],
        }
        return CommandResult(payload, lines, 0 if all(r.passed for r in reports) else 1)

    def _handle_intermediate_dims(self, args) -> CommandResult:
        rows = []
        for n in range(self.settings.max_level + 1):
            rows.append({
                "n": n,
                "K_trivial": len(self.algebra.fixed_point_words(n, Side.K)),
                "H_trivial": len(self.algebra.fixed_point_words(n, Side.H)),
                "dim_P_n": len(self.ctx.enumerate_basis(n)),
            })
        lines = ["n  K=1  H=1  P_n"] + [
            f"{r['n']}  {r['K_trivial']}  {r['H_trivial']}  {r['dim_P_n']}" for r in rows
        ]
        return CommandResult({"intermediate_dims": rows}, lines)

    def _handle_calibrate(self, args) -> CommandResult:
        survivors = calibrate_critical_weights(self.algebra)
        tables = [
            {f"{kind.value}/{'shaded' if shaded else 'unshaded'}": exponent for (kind, shaded), exponent in t.items()}
            for t in survivors
        ]
        lines = [f"{len(tables)} surviving assignment(s)"] + [
            ", ".join(f"{k}: r^{v}" for k, v in t.items()) for t in tables
        ]
        return CommandResult({"survivors": tables}, lines, 0 if tables else 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="group-planar",
        description="Exact computations in the group-type planar algebra of two finite subgroups",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, default=DEFAULT_CONFIG, help="Context JSON file")
    parser.add_argument("--max-n", type=int, default=None, help="Largest level to compute (capped at 5)")
    parser.add_argument(
        "--format", choices=[f.value for f in OutputFormat], default=OutputFormat.TEXT.value, help="Output format"
    )
    parser.add_argument("--seed", type=int, default=None, help="Seed for sampled sweeps")
    parser.add_argument("--samples", type=int, default=None, help="Cases per sampled sweep")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logs")

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("dims", help="dim P_n for n up to --max-n")
    basis = commands.add_parser("basis", help="Basis words of P_n")
    basis.add_argument("n", type=int)

    for name, help_text in (
        ("star", "Adjoint of a basis word"),
        ("include", "Inclusion P_n -> P_n+1"),
        ("expect-right", "Right conditional expectation"),
        ("expect-left", "Left conditional expectation"),
        ("trace", "Normalized Markov trace"),
    ):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("n", type=int)
        sub.add_argument("x", help="Comma-separated element names, e.g. e,b")

    mul = commands.add_parser("mul", help="Product of two basis words")
    mul.add_argument("n", type=int)
    mul.add_argument("x")
    mul.add_argument("y")

    jones = commands.add_parser("jones", help="Jones projection tangle value in P_n+1")
    jones.add_argument("n", type=int)
    gram = commands.add_parser("gram", help="Gram matrix of the trace form on P_n")
    gram.add_argument("n", type=int)

    evaluate = commands.add_parser("eval", help="State-sum value of a tangle file")
    evaluate.add_argument("--tangle", type=Path, required=True)
    evaluate.add_argument("--input", action="append", metavar="D=word", help="Label of an internal disc")

    tangle = commands.add_parser("tangle", help="Print a structural tangle and its geometry")
    tangle.add_argument("kind", choices=[k.value for k in TangleKind])
    tangle.add_argument("n", type=int)

    commands.add_parser("commutant-dims", help="Sizes of N'∩M_n and M'∩M_n against dim P_n+1")
    iso = commands.add_parser("iso-check", help="Check psi_n: N'∩M_n -> P_n+1")
    iso.add_argument("n", type=int)

    verify = commands.add_parser("verify", help="Run verification suites")
    verify.add_argument("--suite", choices=[s.value for s in SuiteName], default=SuiteName.ALL.value)

    commands.add_parser("intermediate-dims", help="Dimensions of the intermediate sub-planar algebras")
    commands.add_parser("calibrate", help="Search the critical-point weights")
    return parser


def render(result: CommandResult, output: OutputFormat) -> str:
    if output is OutputFormat.JSON:
        return json.dumps(result.payload, indent=2, ensure_ascii=False)
    return "\n".join(result.lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)

    settings = EngineSettings.from_env()
    settings.update(max_level=args.max_n, seed=args.seed, sample_size=args.samples)
    try:
        ctx = load_context(args.config, settings)
        result = CommandHandler(ctx, settings).dispatch(args.command, args)
    except PlanarAlgebraError as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2

    print(render(result, OutputFormat(args.format)))
    return result.status


if __name__ == "__main__":
    sys.exit(main())
