"""Experiment configuration: YAML loading, method specifications, and the
hyperparameter rules that turn (n, alpha) into region and inducing counts.

Key names are normative; the file format is YAML with nested sections. The
count rules use gamma = nu + 1, K = floor(n^alpha) (at least 1), and
m = min(m_max, (n/K)^(2/gamma), 0.5 n/K), floored and at least 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from .errors import ConfigError
from .kernels import KernelParams
from .simulate import ScenarioConfig

GP, PP, EPP, MREPP = "gp", "pp", "epp", "mrepp"
METHOD_KINDS = (GP, PP, EPP, MREPP)

DEFAULT_N_GRID = (250, 500, 1000, 2000)
DEFAULT_INFLUENCE_N = (200, 400, 800, 1600)
DEFAULT_INFLUENCE_M = (10,)


def gamma_of(nu: float) -> float:
    """Effective smoothness driving the inducing-count rule (planar designs)."""
    return nu + 1.0


def regions_for(n: int, alpha: float) -> int:
    if not (0.0 <= alpha < 1.0):
        raise ConfigError(f"alpha must lie in [0, 1), got {alpha}")
    return max(1, int(n ** alpha))


def inducing_for(n: int, K: int, gamma: float, m_max: int | None = None) -> int:
    m = min((n / K) ** (2.0 / gamma), 0.5 * (n / K))
    if m_max is not None:
        m = min(m, m_max)
    return max(1, int(m))


@dataclass(frozen=True)
class MethodSpec:
    kind: str
    label: str
    m: int | None = None                 # pp
    alpha: float | None = None           # epp
    alphas: tuple | None = None          # mrepp
    m_max: int | None = None             # mrepp
    delta: float | None = None           # None means the default overlap
    calib_fraction: float = 0.2          # mrepp

    def resolve(self, n: int, nu: float) -> dict:
        """Concrete hyperparameters for a given training size."""
        gamma = gamma_of(nu)
        if self.kind == GP:
            return {"kind": GP}
        if self.kind == PP:
            m = self.m if self.m is not None else inducing_for(n, 1, gamma)
            return {"kind": PP, "m": m}
        if self.kind == EPP:
            K = regions_for(n, self.alpha)
            return {"kind": EPP, "alpha": self.alpha, "K": K,
                    "m": inducing_for(n, K, gamma), "delta": self.delta}
        Ks = [regions_for(n, a) for a in self.alphas]
        if any(k2 <= k1 for k1, k2 in zip(Ks, Ks[1:])):
            raise ConfigError(
                f"alphas {list(self.alphas)} give non-increasing region counts {Ks} "
                f"at n={n}")
        ms = [inducing_for(n, K, gamma, self.m_max) for K in Ks]
        return {"kind": MREPP, "alphas": list(self.alphas), "K": Ks, "m": ms,
                "m_max": self.m_max, "delta": self.delta,
                "calib_fraction": self.calib_fraction}


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: ScenarioConfig
    methods: tuple
    replicates: int = 1
    seed: int = 0
    output: str = "results.csv"
    jobs: int = 1
    n_grid: tuple = DEFAULT_N_GRID
    influence_n: tuple = DEFAULT_INFLUENCE_N
    influence_m: tuple = DEFAULT_INFLUENCE_M
    raw: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.replicates < 1:
            raise ConfigError("replicates must be at least 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        labels = [m.label for m in self.methods]
        if len(set(labels)) != len(labels):
            raise ConfigError(f"method labels must be distinct, got {labels}")


def _parse_delta(value):
    if value in (None, "auto"):
        return None
    return float(value)


def _parse_method(entry: dict) -> MethodSpec:
    if not isinstance(entry, dict) or "kind" not in entry:
        raise ConfigError(f"each method needs a 'kind', got {entry!r}")
    kind = str(entry["kind"]).lower()
    if kind not in METHOD_KINDS:
        raise ConfigError(f"unknown method kind {kind!r}, expected one of {METHOD_KINDS}")
    label = entry.get("label")
    if kind == GP:
        return MethodSpec(GP, label or "GP")
    if kind == PP:
        m = entry.get("m")
        return MethodSpec(PP, label or "PP", m=None if m is None else int(m))
    if kind == EPP:
        if "alpha" not in entry:
            raise ConfigError("epp methods need an 'alpha'")
        alpha = float(entry["alpha"])
        return MethodSpec(EPP, label or f"EPP({alpha:g})", alpha=alpha,
                          delta=_parse_delta(entry.get("delta", "auto")))
    alphas = entry.get("alphas")
    if not alphas:
        raise ConfigError("mrepp methods need a nonempty 'alphas' list")
    alphas = tuple(float(a) for a in alphas)
    if any(a2 <= a1 for a1, a2 in zip(alphas, alphas[1:])):
        raise ConfigError(f"mrepp alphas must be strictly increasing, got {list(alphas)}")
    m_max = entry.get("m_max")
    return MethodSpec(MREPP, label or f"MREPP(L={len(alphas)})", alphas=alphas,
                      m_max=None if m_max is None else int(m_max),
                      delta=_parse_delta(entry.get("delta", "auto")),
                      calib_fraction=float(entry.get("calib_fraction", 0.2)))


def _parse_scenario(section: dict, seed: int) -> ScenarioConfig:
    if not isinstance(section, dict):
        raise ConfigError("'scenario' must be a mapping")
    try:
        params_section = dict(section["params"])
        params = KernelParams(eta2=float(params_section.pop("eta2")),
                              phi=float(params_section.pop("phi")),
                              nu=float(params_section.pop("nu")),
                              tau2=float(params_section.pop("tau2")))
    except KeyError as missing:
        raise ConfigError(f"scenario params missing key {missing}") from None
    if params_section:
        raise ConfigError(f"unknown kernel parameter(s): {sorted(params_section)}")
    contamination = section.get("contamination_value")
    r_s = section.get("r_s_target")
    return ScenarioConfig(
        scenario=str(section.get("scenario", "fixed_space")),
        n=int(section["n"]),
        n_test=int(section.get("n_test", 500)),
        params=params,
        contamination_value=None if contamination is None else float(contamination),
        contamination_fraction=float(section.get("contamination_fraction", 0.01)),
        r_s_target=None if r_s is None else float(r_s),
        seed=seed,
    )


def parse_config(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    if "scenario" not in data:
        raise ConfigError("config needs a 'scenario' section")
    seed = int(data.get("seed", 0))
    scenario = _parse_scenario(data["scenario"], seed)
    methods = tuple(_parse_method(m) for m in data.get("methods", []))
    # resolving validates alpha ranges and region-count monotonicity
    for spec in methods:
        spec.resolve(scenario.n, scenario.params.nu)
    return ExperimentConfig(
        scenario=scenario,
        methods=methods,
        replicates=int(data.get("replicates", 1)),
        seed=seed,
        output=str(data.get("output", "results.csv")),
        jobs=int(data.get("jobs", 1)),
        n_grid=tuple(int(n) for n in data.get("n_grid", DEFAULT_N_GRID)),
        influence_n=tuple(int(n) for n in data.get("influence", {}).get("n_grid", DEFAULT_INFLUENCE_N)),
        influence_m=tuple(int(m) for m in data.get("influence", {}).get("m_grid", DEFAULT_INFLUENCE_M)),
        raw=data,
    )


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from None
    return parse_config(data)


def with_seed(config: ExperimentConfig, seed: int) -> ExperimentConfig:
    return replace(config, seed=seed, scenario=replace(config.scenario, seed=seed))


def with_n(config: ExperimentConfig, n: int) -> ExperimentConfig:
    return replace(config, scenario=replace(config.scenario, n=n))
