"""Arrangement analyzer: pipeline orchestration, Pydantic Logfire observability and reports."""

import asyncio
import dataclasses
import json
import os
import time
from collections import defaultdict
from contextlib import nullcontext
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional

from rich.console import Console
from sympy import isprime

try:
    import logfire
    LOGFIRE_AVAILABLE = True
except ImportError:
    logfire = None
    LOGFIRE_AVAILABLE = False

from algebra.errors import EmptyLinearSystemError
from algebra.groebner import EngineOptions, hilbert_series
from algebra.logtangent import (
    DEFAULT_COEFFICIENT_BOUND,
    DEFAULT_MEMBER_RETRIES,
    FreenessCertificate,
    IdentityCheck,
    LogDerivationModule,
    SmoothMember,
    coker_hilbert,
    curves_through,
    d0_hilbert_polynomial_check,
    d0_module,
    find_smooth_member,
    freeness,
    jacobian_route_series,
    passes_through,
    predict_addition,
    regularity_bound_check,
    require_addition_hypotheses,
    theorem_main_check,
)
from algebra.polycore import (
    Polynomial,
    format_polynomial,
    grading,
    parse_polynomial,
)
from algebra.singcurve import (
    DEFAULT_CHART_RETRIES,
    Arrangement,
    SingularityProfile,
    bezout_total,
    milnor_union_delta,
    reduced_point_count,
    require_reduced,
    singularity_profile,
    union_chart,
)
from commands.base import Command, CommandResult
from utils.arrangement_file import ArrangementFile, load_arrangement_file, render_arrangement
from utils.command_util import CommandCall, execute_commands
from utils.report_util import build_markdown, failed_identities, render_corpus, render_report, report_json

ANALYZER_VERSION = "0.1.0"
REPORT_VERSION = 1


def _env_int(environ: Mapping[str, str], name: str) -> Optional[int]:
    raw = environ.get(name, "").strip()
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got '{raw}'") from None


@dataclass
class AnalyzerConfig:
    """Configuration of the engine and the pipeline."""

    prime: Optional[int] = None
    seed: Optional[int] = None
    chart_retries: int = DEFAULT_CHART_RETRIES
    member_retries: int = DEFAULT_MEMBER_RETRIES
    coefficient_bound: int = DEFAULT_COEFFICIENT_BOUND
    pair_limit: Optional[int] = None
    table_span: int = 8
    include_timings: bool = False

    def __post_init__(self) -> None:
        if self.prime is not None and not isprime(self.prime):
            raise ValueError(f"{self.prime} is not a prime")
        if self.pair_limit is not None and self.pair_limit < 1:
            raise ValueError("the pair limit must be positive")

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "AnalyzerConfig":
        """Defaults overridden by ARRANGEMENT_* variables."""
        environ = os.environ if environ is None else environ
        values: Dict[str, Any] = {
            "prime": _env_int(environ, "ARRANGEMENT_PRIME"),
            "seed": _env_int(environ, "ARRANGEMENT_SEED"),
            "chart_retries": _env_int(environ, "ARRANGEMENT_CHART_RETRIES"),
            "member_retries": _env_int(environ, "ARRANGEMENT_MEMBER_RETRIES"),
            "pair_limit": _env_int(environ, "ARRANGEMENT_PAIR_LIMIT"),
        }
        return cls().with_overrides(**values)

    def with_overrides(self, **overrides: Any) -> "AnalyzerConfig":
        """Copy with every non-None override applied."""
        return dataclasses.replace(self, **{k: v for k, v in overrides.items() if v is not None})


@dataclass
class StepMetrics:
    """Timing of one pipeline step."""

    total_calls: int = 0
    successful_calls: int = 0
    failed_calls: int = 0
    total_duration_ms: float = 0
    min_duration_ms: Optional[float] = None
    max_duration_ms: Optional[float] = None

    @property
    def avg_duration_ms(self) -> float:
        return self.total_duration_ms / self.total_calls if self.total_calls > 0 else 0

    @property
    def error_rate(self) -> float:
        return (self.failed_calls / self.total_calls * 100) if self.total_calls > 0 else 0

    def record_execution(self, duration_ms: float, is_error: bool = False) -> None:
        self.total_calls += 1
        self.total_duration_ms += duration_ms
        if is_error:
            self.failed_calls += 1
        else:
            self.successful_calls += 1
        if self.min_duration_ms is None or duration_ms < self.min_duration_ms:
            self.min_duration_ms = duration_ms
        if self.max_duration_ms is None or duration_ms > self.max_duration_ms:
            self.max_duration_ms = duration_ms


@dataclass
class LoadedArrangement:
    """A parsed, validated arrangement with the settings it runs under."""

    file: ArrangementFile
    arrangement: Arrangement
    seed: int
    prime: Optional[int]
    options: EngineOptions

    @property
    def source(self) -> str:
        return self.file.source


def _check(holds: bool, left: Any = None, right: Any = None) -> Dict[str, Any]:
    return {"holds": bool(holds), "left": left, "right": right}


def _identity(check: IdentityCheck) -> Dict[str, Any]:
    return _check(check.holds, check.left, check.right)


def _freeness_section(cert: FreenessCertificate) -> Dict[str, Any]:
    return {
        "is_free": cert.is_free,
        "d0_degrees": list(cert.d0_degrees),
        "exponents": list(cert.exponents) if cert.exponents else None,
        "determinant_ratio": cert.determinant_ratio,
        "projective_dimension": cert.projective_dimension,
    }


class Analyzer:
    """Runs the arrangement pipeline step by step and renders its reports."""

    def __init__(
        self,
        name: str = "arrangement-analyzer",
        config: Optional[AnalyzerConfig] = None,
        commands: Optional[List[Command]] = None,
        verbose: bool = False,
        enable_logfire: bool = False,
        logfire_token: Optional[str] = None,
        console: Optional[Console] = None,
    ) -> None:
        """Initialize an Analyzer.

        Args:
            name: Analyzer identifier for logging
            config: Engine and pipeline configuration
            commands: Commands to expose (the bundled ones by default)
            verbose: Print step progress
            enable_logfire: Enable Logfire observability
            logfire_token: Optional Logfire token (uses env var if not provided)
            console: Rich console used for rendering
        """
        self.name = name
        self.config = config or AnalyzerConfig()
        self.verbose = verbose
        self.console = console or Console()
        self.step_metrics: Dict[str, StepMetrics] = defaultdict(StepMetrics)

        if commands is None:
            from commands import default_commands

            commands = default_commands(self)
        self.commands = commands

        self._logfire_configured = False
        if enable_logfire and LOGFIRE_AVAILABLE:
            if logfire_token:
                logfire.configure(token=logfire_token)
            else:
                logfire.configure()
            logfire.info(f"Analyzer {name} initialized with Logfire")
            self._logfire_configured = True

        if self.verbose:
            print(f"\n[{self.name}] Analyzer initialized")

    # Steps -----------------------------------------------------------------

    def step(self, name: str, func: Callable[..., Any], *args: Any, **kwargs: Any) -> Any:
        """Run one pipeline step inside a span and record its timing."""
        start = time.perf_counter()
        failed = False
        span = logfire.span(f"analyzer.{name}") if self._logfire_configured else nullcontext()
        with span:
            try:
                return func(*args, **kwargs)
            except Exception as e:
                failed = True
                if self._logfire_configured:
                    logfire.info(f"Step {name} failed", error=str(e))
                raise
            finally:
                duration_ms = (time.perf_counter() - start) * 1000
                self.step_metrics[name].record_execution(duration_ms, failed)
                if self._logfire_configured and not failed:
                    logfire.info(f"Step {name} done", duration_ms=round(duration_ms, 3))
                if self.verbose:
                    print(f"[{self.name}] {name}: {duration_ms:.1f} ms{' (failed)' if failed else ''}")

    def get_step_metrics(self) -> Dict[str, Dict[str, Any]]:
        metrics = {}
        for step_name, step_metric in sorted(self.step_metrics.items()):
            if step_metric.total_calls > 0:
                metrics[step_name] = {
                    "total_calls": step_metric.total_calls,
                    "successful_calls": step_metric.successful_calls,
                    "failed_calls": step_metric.failed_calls,
                    "error_rate": f"{step_metric.error_rate:.1f}%",
                    "avg_duration_ms": f"{step_metric.avg_duration_ms:.3f}",
                    "min_duration_ms": f"{step_metric.min_duration_ms:.3f}",
                    "max_duration_ms": f"{step_metric.max_duration_ms:.3f}",
                    "total_duration_ms": f"{step_metric.total_duration_ms:.3f}",
                }
        return metrics

    # Pipeline --------------------------------------------------------------

    def load(self, path: str | Path, prime: Optional[int] = None, seed: Optional[int] = None) -> LoadedArrangement:
        """Parse and validate an arrangement file.

        Settings resolve as: explicit argument, then the analyzer config,
        then the file's own `seed`/`option` lines, then defaults.
        """
        file = self.step("parse", load_arrangement_file, path)
        for candidate in (prime, self.config.prime, file.prime):
            if candidate is not None:
                prime = candidate
                break
        for candidate in (seed, self.config.seed, file.seed, 1):
            if candidate is not None:
                seed = candidate
                break
        pair_limit = self.config.pair_limit if self.config.pair_limit is not None else file.options.get("pair_limit")
        options = EngineOptions(pair_limit=pair_limit)
        components = self.step("parse", file.components, prime)
        arrangement = self.step("validate", Arrangement.of, components)
        self.step("validate", require_reduced, arrangement.product, options)
        return LoadedArrangement(file, arrangement, seed, prime, options)

    def parse_curve(self, loaded: LoadedArrangement, text: str) -> Polynomial:
        return self.step("parse", parse_polynomial, text, loaded.arrangement.ring)

    def _header(self, command: str, loaded: LoadedArrangement) -> Dict[str, Any]:
        arrangement = loaded.arrangement
        return {
            "report_version": REPORT_VERSION,
            "analyzer_version": ANALYZER_VERSION,
            "command": command,
            "source": loaded.source,
            "seed": loaded.seed,
            "prime": loaded.prime,
            "arrangement": {
                "variables": list(loaded.file.variables),
                "components": [format_polynomial(c) for c in arrangement.components],
                "degrees": arrangement.degrees,
                "degree": arrangement.degree,
            },
        }

    def profile(self, loaded: LoadedArrangement) -> SingularityProfile:
        return self.step(
            "singularities",
            singularity_profile,
            loaded.arrangement,
            loaded.seed,
            self.config.chart_retries,
            loaded.options,
        )

    def build_report(
        self,
        command: str,
        loaded: LoadedArrangement,
        curve: Optional[Polynomial] = None,
        extra: Optional[Mapping[str, Any]] = None,
        profile: Optional[SingularityProfile] = None,
    ) -> Dict[str, Any]:
        """Singularities, D0 and freeness of A, and the addition of `curve` if given."""
        arrangement, options = loaded.arrangement, loaded.options
        report = self._header(command, loaded)
        identities: Dict[str, Dict[str, Any]] = {}

        profile = profile or self.profile(loaded)
        report["profile"] = {
            "mu_total": profile.mu_total,
            "tau_total": profile.tau_total,
            "quasihomogeneous_all": profile.quasihomogeneous_all,
            "sing_point_count": profile.sing_point_count,
            "chart_seed": profile.chart_seed,
        }
        identities["tau_at_most_mu"] = _check(profile.tau_total <= profile.mu_total, profile.tau_total, profile.mu_total)

        module: LogDerivationModule = self.step("d0", d0_module, arrangement.product, options, False)
        cert: FreenessCertificate = self.step("freeness", freeness, module, options)
        report["d0"] = {
            "degrees": module.degrees,
            "generator_count": module.generator_count,
            "der_log_degrees": module.der_log_degrees(),
            "generators": [[format_polynomial(c) for c in g] for g in module.d0.generators],
        }
        report["freeness"] = _freeness_section(cert)
        if cert.is_free:
            identities["saito_determinant"] = _check(True, cert.determinant_ratio, "nonzero scalar")
            identities["exponent_sum"] = _check(sum(cert.exponents) == arrangement.degree, sum(cert.exponents), arrangement.degree)
        identities["d0_hilbert_polynomial"] = _identity(
            self.step("identities", d0_hilbert_polynomial_check, module, options)
        )
        direct = self.step("identities", hilbert_series, module.d0, options)
        routed = self.step("identities", jacobian_route_series, arrangement.product, options)
        identities["d0_two_routes"] = _check(
            direct.numerator == routed.numerator, direct.format_numerator(), routed.format_numerator()
        )

        if extra:
            report.update(extra)
        if curve is not None:
            report["addition"] = self._addition(loaded, curve, profile, module, cert, identities)

        report["identities"] = identities
        failed = failed_identities(report)
        report["status"] = {"passed": not failed, "failed": failed}
        if self.config.include_timings:
            report["timings"] = self.get_step_metrics()
        if self._logfire_configured:
            logfire.info(f"Report {command} for {loaded.source}", passed=not failed, failed=failed)
        return report

    def _addition(
        self,
        loaded: LoadedArrangement,
        curve: Polynomial,
        profile: SingularityProfile,
        module: LogDerivationModule,
        cert: FreenessCertificate,
        identities: Dict[str, Dict[str, Any]],
    ) -> Dict[str, Any]:
        arrangement, options, seed = loaded.arrangement, loaded.options, loaded.seed
        curve = curve.set_ring(arrangement.ring)
        union = self.step("hypotheses", require_addition_hypotheses, arrangement, curve, seed, options)
        m, n = arrangement.degree, int(grading(curve).degree)

        chart = self.step("intersection", union_chart, curve, arrangement, seed, self.config.chart_retries, options)
        k = self.step("intersection", reduced_point_count, curve, arrangement, chart, seed, options)
        bezout = self.step("intersection", bezout_total, curve, arrangement, chart, seed, options)
        identities["bezout"] = _check(bezout == m * n, bezout, m * n)

        delta = self.step("milnor_delta", milnor_union_delta, curve, arrangement, seed, options)
        identities["milnor_delta"] = _check(delta.holds, delta.left, delta.right)

        union_module = self.step("d0_union", d0_module, union.product, options, False)
        union_cert = self.step("freeness_union", freeness, union_module, options)
        coker = self.step(
            "cokernel", coker_hilbert, module, union_module, n, k, self.config.table_span, options
        )
        for check in theorem_main_check(coker).checks:
            identities[check.name] = _identity(check)

        prediction_section = None
        if cert.is_free:
            prediction = self.step("prediction", predict_addition, module.degrees, n, coker.series)
            agrees = prediction.is_free == union_cert.is_free and (
                not prediction.is_free or list(prediction.d0_degrees) == union_module.degrees
            )
            identities["prediction_agrees"] = _check(
                agrees,
                list(prediction.d0_degrees) if prediction.is_free else "not free",
                union_module.degrees if union_cert.is_free else "not free",
            )
            prediction_section = {
                "is_free": prediction.is_free,
                "d0_degrees": list(prediction.d0_degrees) if prediction.d0_degrees else None,
                "exponents": list(prediction.exponents) if prediction.exponents else None,
                "numerator": prediction.format_numerator(),
            }

        reg = self.step("regularity", regularity_bound_check, module, union_module, n, k, options)
        identities["regularity_bound"] = _check(reg.holds, reg.reg, reg.bound)

        through = profile.points_ideal is not None and passes_through(profile.points_ideal, curve, options)
        return {
            "curve": format_polynomial(curve),
            "n": n,
            "genus": coker.genus,
            "k": k,
            "bezout_total": bezout,
            "passes_through_singular_points": through,
            "divisor_degree": coker.divisor_degree,
            "milnor": {
                "mu_union": delta.mu_union,
                "mu_arrangement": delta.mu_arrangement,
                "difference": delta.left,
                "expected": delta.right,
            },
            "union_d0": {
                "degrees": union_module.degrees,
                "generator_count": union_module.generator_count,
                "der_log_degrees": union_module.der_log_degrees(),
            },
            "union_freeness": _freeness_section(union_cert),
            "cokernel": {
                "numerator": coker.series.format_numerator(),
                "numerator_terms": [list(term) for term in coker.series.terms],
                "hilbert_polynomial": str(coker.hilbert_polynomial.as_expr()),
                "expected_polynomial": f"{coker.expected_polynomial[0]}*t + {coker.expected_polynomial[1]}",
                "lower_window": coker.lower_window,
                "upper_window": coker.upper_window,
                "table": {str(t): value for t, value in coker.hilbert_function},
            },
            "prediction": prediction_section,
            "regularity": {
                "reg": reg.reg,
                "reg_arrangement": reg.reg_arrangement,
                "bound": reg.bound,
            },
        }

    def find_member(
        self, loaded: LoadedArrangement, degree: int, profile: Optional[SingularityProfile] = None
    ) -> tuple[Dict[str, Any], SmoothMember, SingularityProfile]:
        """A certified smooth degree-d curve through Sing(A), with the linear system it came from."""
        profile = profile or self.profile(loaded)
        basis = self.step("linear_system", curves_through, profile.points_ideal, degree, loaded.options)
        section: Dict[str, Any] = {
            "degree": degree,
            "h0": len(basis),
            "sing_point_count": profile.sing_point_count,
            "basis": [format_polynomial(b) for b in basis],
        }
        if not basis:
            raise EmptyLinearSystemError(
                f"empty linear system: h0 = 0, no curve of degree {degree} passes through "
                f"the {profile.sing_point_count} singular points"
            )
        member = self.step(
            "smooth_member",
            find_smooth_member,
            basis,
            loaded.arrangement,
            loaded.seed,
            self.config.member_retries,
            self.config.coefficient_bound,
            loaded.options,
        )
        section["curve"] = format_polynomial(member.curve)
        section["coefficients"] = list(member.coefficients)
        section["attempts"] = member.attempts
        return section, member, profile

    def augmented_file_text(self, loaded: LoadedArrangement, curve: Polynomial, degree: int) -> str:
        return render_arrangement(
            loaded.file.variables,
            loaded.arrangement.components,
            add=curve,
            seed=loaded.seed,
            options=loaded.file.options,
            header=f"{Path(loaded.source).name} with a certified degree {degree} curve through its singular points",
        )

    # Running commands ----------------------------------------------------------

    async def run_async(self, name: str, **arguments: Any) -> CommandResult:
        command_dict = {command.name: command for command in self.commands}
        span = logfire.span(f"analyzer.command.{name}", **arguments) if self._logfire_configured else nullcontext()
        with span:
            results = await execute_commands([CommandCall(name, arguments)], command_dict, analyzer=self)
        return results[0]

    def run(self, name: str, **arguments: Any) -> CommandResult:
        """Run one command synchronously."""
        return asyncio.run(self.run_async(name, **arguments))

    # Output ------------------------------------------------------------------

    def save_report(self, report: Mapping[str, Any], filename: str) -> str:
        """Write the machine-readable report; same input and seed give the same bytes."""
        try:
            if not filename.endswith(".json"):
                filename += ".json"
            with open(filename, "w", encoding="utf-8") as f:
                f.write(report_json(report))
            return f"Report saved to {filename}"
        except OSError as e:
            return f"Error saving report: {e}"

    def export_markdown(self, report: Mapping[str, Any], filename: Optional[str] = None) -> str:
        try:
            if not filename:
                timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
                filename = f"report_{report.get('command', 'analysis')}_{timestamp}.md"
            elif not filename.endswith(".md"):
                filename += ".md"
            title = f"{report.get('command', 'analysis')}: {report.get('source', '')}".rstrip(": ")
            with open(filename, "w", encoding="utf-8") as f:
                f.write(build_markdown(json.loads(report_json(report)), title))
            return f"Report exported to {filename}"
        except OSError as e:
            return f"Error exporting report: {e}"

    def render(self, result: CommandResult) -> None:
        report = json.loads(report_json(result.content))
        if result.is_error:
            self.console.print(f"[red]Error ({result.command}, exit {result.exit_code}): {result.error}[/red]")
            hypothesis = report.get("error", {}).get("hypothesis")
            if hypothesis:
                self.console.print(f"[red]Failed hypothesis: {hypothesis}[/red]")
            return
        if report.get("command") == "corpus":
            render_corpus(report, self.console)
        else:
            render_report(report, self.console, title=f"{report.get('command')}: {report.get('source')}")
        status = report.get("status", {})
        if status.get("passed"):
            self.console.print("[green]All checked identities hold.[/green]")
        else:
            self.console.print(f"[bold red]Failed: {', '.join(status.get('failed', []))}[/bold red]")
