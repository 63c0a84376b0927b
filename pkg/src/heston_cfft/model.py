"""Heston model parameters and per-measure PDE coefficients.

The exercise probabilities P1 (stock-numeraire measure) and P2
(risk-neutral measure) solve structurally identical PDEs that differ only
in a trio of constants: the variance-drift scale ``a``, the effective
reversion speed ``b`` and the log-drift coefficient ``c`` (+1/2 under P1,
-1/2 under P2). Everything downstream of this module consumes those
constants through :class:`MeasureCoefficients`.

Two conventions for ``b`` are exposed. With ``kbar = kappa + sigma*lambda``
the ``consistent`` mode uses b2 = kbar (and b1 = kbar - rho*sigma), which is
the classical risk-neutral reversion speed. The ``paper_literal`` mode adds
a further ``lambda*sigma`` to both, i.e. b2 = kbar + lambda*sigma. The two
coincide when lambda = 0. The reference prices in the test suite are
reproduced by ``consistent``, which is therefore the default everywhere.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass


class Measure(enum.Enum):
    """Pricing measures entering C = S*P1 - K*exp(-r*tau)*P2."""

    P1 = "P1"
    P2 = "P2"


class CoeffMode(enum.Enum):
    CONSISTENT = "consistent"
    PAPER_LITERAL = "paper_literal"


class VarianceBoundary(enum.Enum):
    """Feller classification of the origin for the variance process."""

    UNATTAINABLE_ZERO = "unattainable_zero"
    REFLECTING_ZERO = "reflecting_zero"


class ParameterError(ValueError):
    """Raised when Heston parameters violate their domain constraints."""

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("invalid parameters: " + "; ".join(problems))


@dataclass(frozen=True)
class HestonParams:
    """Model constants. kappa, theta, sigma > 0 and rho strictly in (-1, 1).

    ``lambda_mpr`` is the constant market price of volatility risk; ``r`` the
    continuously compounded risk-free rate. rho = +/-1 exactly is rejected
    because the large-frequency decay constant of the characteristic
    function vanishes there.
    """

    kappa: float
    theta: float
    sigma: float
    rho: float
    lambda_mpr: float = 0.0
    r: float = 0.0

    def __post_init__(self):
        problems = []
        for name in ("kappa", "theta", "sigma", "rho", "lambda_mpr", "r"):
            if not math.isfinite(getattr(self, name)):
                problems.append(f"{name} must be finite")
        if not problems:
            if self.kappa <= 0.0:
                problems.append(f"kappa must be > 0, got {self.kappa}")
            if self.theta <= 0.0:
                problems.append(f"theta must be > 0, got {self.theta}")
            if self.sigma <= 0.0:
                problems.append(f"sigma must be > 0, got {self.sigma}")
            if not -1.0 < self.rho < 1.0:
                problems.append(f"rho must lie strictly inside (-1, 1), got {self.rho}")
        if problems:
            raise ParameterError(problems)

    @property
    def feller_satisfied(self) -> bool:
        return 2.0 * self.kappa * self.theta >= self.sigma**2

    @property
    def kappa_bar(self) -> float:
        """Risk-neutral reversion speed kappa + sigma*lambda."""
        return self.kappa + self.sigma * self.lambda_mpr

    @property
    def theta_bar(self) -> float:
        """Risk-neutral long-run variance kappa*theta/kappa_bar."""
        kbar = self.kappa_bar
        if kbar == 0.0:
            raise ParameterError(["kappa + sigma*lambda_mpr must be nonzero for theta_bar"])
        return self.kappa * self.theta / kbar


@dataclass(frozen=True)
class MeasureCoefficients:
    """Per-measure constants (a, b, c) plus the sigma/rho context needed to
    evaluate the characteristic function. ``a`` equals kappa*theta under
    both modes and both measures."""

    measure: Measure
    a: float
    b: float
    c: float
    mode: CoeffMode
    sigma: float
    rho: float


def coefficients(params: HestonParams, measure: Measure,
                 mode: CoeffMode = CoeffMode.CONSISTENT) -> MeasureCoefficients:
    """Derive (a, b, c) for a measure under the chosen reversion convention."""
    measure = Measure(measure)
    mode = CoeffMode(mode)
    kbar = params.kappa_bar
    a = params.kappa * params.theta
    if measure is Measure.P1:
        c = 0.5
        b = kbar - params.rho * params.sigma
    else:
        c = -0.5
        b = kbar
    if mode is CoeffMode.PAPER_LITERAL:
        b += params.lambda_mpr * params.sigma
    return MeasureCoefficients(measure=measure, a=a, b=b, c=c, mode=mode,
                               sigma=params.sigma, rho=params.rho)


def feller_classify(params: HestonParams) -> VarianceBoundary:
    """Zero is unattainable iff 2*kappa*theta >= sigma^2 (boundary included)."""
    if params.feller_satisfied:
        return VarianceBoundary.UNATTAINABLE_ZERO
    return VarianceBoundary.REFLECTING_ZERO


@dataclass(frozen=True)
class MarketState:
    """A pricing point. Log-moneyness x = ln(spot/strike) is derived, never
    stored, so it cannot drift out of sync with spot and strike."""

    spot: float
    strike: float
    v: float
    tau: float

    def __post_init__(self):
        problems = []
        if not (math.isfinite(self.spot) and self.spot > 0.0):
            problems.append(f"spot must be > 0, got {self.spot}")
        if not (math.isfinite(self.strike) and self.strike > 0.0):
            problems.append(f"strike must be > 0, got {self.strike}")
        if not (math.isfinite(self.v) and self.v >= 0.0):
            problems.append(f"v must be >= 0, got {self.v}")
        if not (math.isfinite(self.tau) and self.tau > 0.0):
            problems.append(f"tau must be > 0, got {self.tau}")
        if problems:
            raise ParameterError(problems)

    @property
    def x(self) -> float:
        return math.log(self.spot / self.strike)

    def with_spot(self, spot: float) -> "MarketState":
        return MarketState(spot=spot, strike=self.strike, v=self.v, tau=self.tau)

    def with_strike(self, strike: float) -> "MarketState":
        return MarketState(spot=self.spot, strike=strike, v=self.v, tau=self.tau)


CONFIG_KEYS = ("kappa", "theta", "sigma", "rho", "lambda", "r", "mode")


class ConfigError(ValueError):
    """Raised for malformed JSON parameter files."""


def load_params(path) -> tuple[HestonParams, CoeffMode]:
    """Read model parameters from a JSON file.

    Expects exactly the keys kappa, theta, sigma, rho, lambda, r, mode.
    Unknown or missing keys are reported by name.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top-level JSON value must be an object")
    missing = [k for k in CONFIG_KEYS if k not in raw]
    unknown = [k for k in raw if k not in CONFIG_KEYS]
    if missing or unknown:
        parts = []
        if missing:
            parts.append("missing keys: " + ", ".join(missing))
        if unknown:
            parts.append("unknown keys: " + ", ".join(unknown))
        raise ConfigError(f"{path}: " + "; ".join(parts))
    try:
        mode = CoeffMode(raw["mode"])
    except ValueError:
        raise ConfigError(
            f"{path}: field 'mode' must be one of "
            f"{[m.value for m in CoeffMode]}, got {raw['mode']!r}") from None
    numeric = {}
    for key in ("kappa", "theta", "sigma", "rho", "lambda", "r"):
        val = raw[key]
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise ConfigError(f"{path}: field {key!r} must be a number, got {val!r}")
        numeric[key] = float(val)
    try:
        params = HestonParams(kappa=numeric["kappa"], theta=numeric["theta"],
                              sigma=numeric["sigma"], rho=numeric["rho"],
                              lambda_mpr=numeric["lambda"], r=numeric["r"])
    except ParameterError as exc:
        raise ConfigError(f"{path}: " + "; ".join(exc.problems)) from exc
    return params, mode
