"""
Scenario configuration files.

A scenario is a TOML document with the sections ``[eos]``, ``[coeffs]``,
``[scheme]``, ``[grid]``, ``[ic]``, ``[run]``, ``[diagnostics]`` and
``[output]`` plus a top-level ``seed``. Example::

    seed = 7

    [eos]
    kind = "ideal"
    gamma = 1.4

    [coeffs]
    c0 = 0.5            # mesh scaled: d = c0 h max(|u|+c), a = (1 - ratio_x) d
    gform = "parabolic"

    [scheme]
    scheme = "gp-regularized"
    integrator = "ssp-rk3"
    cfl = 0.5

    [grid]
    n = [400]
    extent = [[-1.0, 1.0]]
    boundary = "farfield"

    [ic]
    kind = "riemann"
    left = [1.0, 0.0, 1.0]
    right = [0.125, 0.0, 0.1]

    [run]
    t_end = 0.2

    [diagnostics]
    certificates = ["positivity", "min_entropy", "entropy"]
    families = ["physical"]
"""

from dataclasses import asdict, dataclass, field, fields
from typing import List, Optional

import tomli
import tomli_w

from .errors import ConfigError
from .regularization import GFORMS, RegularizationCoeffs
from .solver.grid import BOUNDARIES, Grid
from .solver.initial import KINDS as IC_KINDS
from .solver.schemes import L_FORMS
from .solver.stepping import INTEGRATORS, SCHEMES, SchemeSpec

CERTIFICATES = ("positivity", "min_entropy", "entropy")
DEFAULT_SEED = 20240601


@dataclass
class EosBlock:
    kind: str = "ideal"
    gamma: float = 1.4


@dataclass
class CoeffsBlock:
    a: Optional[float] = None
    d: Optional[float] = None
    ratio_x: Optional[float] = None
    c0: Optional[float] = None
    gform: str = "parabolic"
    mu: float = 0.0
    lambda_visc: float = 0.0


@dataclass
class SchemeBlock:
    scheme: str = "gp-regularized"
    integrator: str = "ssp-rk3"
    cfl: float = 0.5
    viscfactor: float = 0.9
    l_form: str = "split"


@dataclass
class GridBlock:
    n: List[int] = field(default_factory=lambda: [200])
    extent: List[List[float]] = field(default_factory=lambda: [[0.0, 1.0]])
    boundary: str = "periodic"


@dataclass
class IcBlock:
    kind: str = "smooth"
    params: dict = field(default_factory=dict)


@dataclass
class RunBlock:
    t_end: float = 0.0
    snapshot_stride: int = 0
    max_steps: Optional[int] = None


@dataclass
class DiagnosticsBlock:
    certificates: List[str] = field(default_factory=lambda: ["positivity", "min_entropy"])
    families: List[str] = field(default_factory=lambda: ["physical"])
    residual_C: float = 1.0
    min_entropy_tol: Optional[float] = None


@dataclass
class OutputBlock:
    directory: str = "out"
    formats: List[str] = field(default_factory=lambda: ["csv"])


@dataclass
class ScenarioConfig:
    seed: int = DEFAULT_SEED
    eos: EosBlock = field(default_factory=EosBlock)
    coeffs: CoeffsBlock = field(default_factory=CoeffsBlock)
    scheme: SchemeBlock = field(default_factory=SchemeBlock)
    grid: GridBlock = field(default_factory=GridBlock)
    ic: IcBlock = field(default_factory=IcBlock)
    run: RunBlock = field(default_factory=RunBlock)
    diagnostics: DiagnosticsBlock = field(default_factory=DiagnosticsBlock)
    output: OutputBlock = field(default_factory=OutputBlock)

    def __post_init__(self):
        validate(self)

    # builders for the library objects

    def build_eos(self):
        from .eos import IdealGas

        return IdealGas(self.eos.gamma)

    def build_grid(self, refine=0):
        g = Grid(tuple(self.grid.n), tuple(tuple(e) for e in self.grid.extent), self.grid.boundary)
        return g.refined(2**refine) if refine else g

    def build_coeffs(self):
        c = self.coeffs
        common = dict(gform=c.gform, mu=c.mu, lambda_visc=c.lambda_visc)
        if c.c0 is not None:
            return RegularizationCoeffs(c0=c.c0, ratio_x=c.ratio_x, **common)
        if c.ratio_x is not None:
            return RegularizationCoeffs.from_ratio(c.ratio_x, c.d, **common)
        return RegularizationCoeffs(a=c.a or 0.0, d=c.d or 0.0, **common)

    def build_scheme(self):
        s = self.scheme
        return SchemeSpec(s.scheme, s.integrator, s.cfl, s.viscfactor, s.l_form)


_BLOCKS = {
    "eos": EosBlock,
    "coeffs": CoeffsBlock,
    "scheme": SchemeBlock,
    "grid": GridBlock,
    "ic": IcBlock,
    "run": RunBlock,
    "diagnostics": DiagnosticsBlock,
    "output": OutputBlock,
}


def _fail(msg):
    raise ConfigError(msg)


def validate(cfg: ScenarioConfig):
    """Check names and numeric ranges; raise ConfigError on the first problem."""
    if cfg.eos.kind != "ideal":
        _fail(f"eos.kind must be 'ideal', got {cfg.eos.kind!r}")
    if not cfg.eos.gamma > 1:
        _fail("eos.gamma must exceed 1")
    c = cfg.coeffs
    if c.gform not in GFORMS:
        _fail(f"coeffs.gform must be one of {GFORMS}")
    for name in ("a", "d", "c0", "mu"):
        v = getattr(c, name)
        if v is not None and v < 0:
            _fail(f"coeffs.{name} must be non-negative")
    if c.ratio_x is not None:
        if c.ratio_x > 1:
            _fail("coeffs.ratio_x must not exceed 1")
        if c.c0 is None and c.d is None:
            _fail("coeffs.ratio_x needs coeffs.d (or coeffs.c0)")
        if c.c0 is None and c.a is not None:
            _fail("give either coeffs.a or coeffs.ratio_x, not both")
    if c.gform == "symmetric" and 2 * c.mu + len(cfg.grid.n) * c.lambda_visc < 0:
        _fail("symmetric viscosity needs 2 mu + dim lambda_visc >= 0")
    s = cfg.scheme
    if s.scheme not in SCHEMES:
        _fail(f"scheme.scheme must be one of {SCHEMES}")
    if s.integrator not in INTEGRATORS:
        _fail(f"scheme.integrator must be one of {INTEGRATORS}")
    if s.l_form not in L_FORMS:
        _fail(f"scheme.l_form must be one of {L_FORMS}")
    if not 0 < s.cfl <= 1:
        _fail("scheme.cfl must lie in (0, 1]")
    if not 0 < s.viscfactor <= 1:
        _fail("scheme.viscfactor must lie in (0, 1]")
    g = cfg.grid
    if len(g.n) not in (1, 2) or len(g.extent) != len(g.n):
        _fail("grid must be 1D or 2D with one extent per axis")
    if any(int(v) < 4 for v in g.n):
        _fail("grid.n must be >= 4 on every axis")
    if any(len(e) != 2 or e[1] <= e[0] for e in g.extent):
        _fail("grid.extent entries must be [lo, hi] with hi > lo")
    if g.boundary not in BOUNDARIES:
        _fail(f"grid.boundary must be one of {BOUNDARIES}")
    if s.scheme == "lax" and len(g.n) != 1:
        _fail("the lax scheme is 1D only")
    if cfg.ic.kind not in IC_KINDS:
        _fail(f"ic.kind must be one of {IC_KINDS}")
    if cfg.run.t_end < 0:
        _fail("run.t_end must be non-negative")
    if cfg.run.snapshot_stride < 0:
        _fail("run.snapshot_stride must be >= 0 (0 writes first and last only)")
    for name in cfg.diagnostics.certificates:
        if name not in CERTIFICATES:
            _fail(f"unknown certificate {name!r}; choose from {CERTIFICATES}")
    for fam in cfg.diagnostics.families:
        kind = fam.partition(":")[0]
        if kind not in ("physical", "harten", "harten_cp", "crafted"):
            _fail(f"unknown entropy family {fam!r}")
    if cfg.diagnostics.residual_C <= 0:
        _fail("diagnostics.residual_C must be positive")


def _block(cls, raw, section):
    if not isinstance(raw, dict):
        _fail(f"[{section}] must be a table")
    if cls is IcBlock:
        raw = dict(raw)
        kind = raw.pop("kind", "smooth")
        params = raw.pop("params", {})
        params.update(raw)
        return IcBlock(kind=kind, params=params)
    names = {f.name for f in fields(cls)}
    unknown = set(raw) - names
    if unknown:
        _fail(f"unknown keys in [{section}]: {', '.join(sorted(unknown))}")
    kw = dict(raw)
    if cls is GridBlock:
        if "n" in kw and not isinstance(kw["n"], list):
            kw["n"] = [kw["n"]]
        if "extent" in kw and kw["extent"] and not isinstance(kw["extent"][0], list):
            kw["extent"] = [kw["extent"]]
        if "n" in kw:
            kw["n"] = [int(v) for v in kw["n"]]
    for f in fields(cls):
        if f.name in kw and f.type in (float, Optional[float]) and isinstance(kw[f.name], int):
            kw[f.name] = float(kw[f.name])
    return cls(**kw)


def from_dict(data: dict) -> ScenarioConfig:
    data = dict(data)
    # shorthand: eos = "ideal", gamma = G at top level
    if isinstance(data.get("eos"), str):
        data["eos"] = {"kind": data["eos"], "gamma": data.pop("gamma", 1.4)}
    unknown = set(data) - set(_BLOCKS) - {"seed"}
    if unknown:
        _fail(f"unknown sections: {', '.join(sorted(unknown))}")
    kw = {name: _block(cls, data[name], name) for name, cls in _BLOCKS.items() if name in data}
    try:
        return ScenarioConfig(seed=int(data.get("seed", DEFAULT_SEED)), **kw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _strip_none(obj):
    if isinstance(obj, dict):
        return {k: _strip_none(v) for k, v in obj.items() if v is not None}
    if isinstance(obj, (list, tuple)):
        return [_strip_none(v) for v in obj]
    return obj


def to_dict(cfg: ScenarioConfig) -> dict:
    d = _strip_none(asdict(cfg))
    ic = d.pop("ic")
    d["ic"] = {"kind": ic["kind"], **ic["params"]}
    return d


def loads(text: str) -> ScenarioConfig:
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    return from_dict(data)


def dumps(cfg: ScenarioConfig) -> str:
    return tomli_w.dumps(to_dict(cfg))


def load(path) -> ScenarioConfig:
    try:
        with open(path, "rb") as fh:
            text = fh.read().decode()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return loads(text)
