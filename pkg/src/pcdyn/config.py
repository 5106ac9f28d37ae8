"""Plain-text run configuration.

One ``key value...`` pair per line; ``#`` starts a comment.  Repeated
``map`` lines build the system in order.  Map descriptors use a prefix
grammar:

    affine <a> <b>
    quadratic <a> <b> <c>
    clamped <lo> <hi> <inner descriptor>
    composed <count> <descriptor> <descriptor> ...

Scalars are written as ``p/q`` fractions, plain decimals, or exponent
notation; under the exact backend decimals parse exactly as rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .ifs import IteratedFunctionSystem
from .maps import Affine, Clamped, Composed, MapDescriptor, Quadratic
from .numerics import Backend, Scalar, format_scalar
from .pcmap import Breakpoints, PiecewiseContraction


class ConfigError(Exception):
    """A malformed or invalid configuration document."""

    def __init__(self, line: Optional[int], message: str):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


@dataclass(frozen=True)
class RunConfig:
    """Validated inputs for one command invocation."""

    backend: Backend
    seed: int = 0
    eps_orbit: float = 1e-10
    eps_fp: float = 1e-13
    max_iter: int = 10_000
    q_depth_cap: int = 64
    q_size_cap: int = 10_000
    composition_cap: int = 100_000
    power_cap: int = 10_000
    generic_depth: int = 5
    maps: tuple[MapDescriptor, ...] = ()
    breakpoints: tuple[Scalar, ...] = ()
    closures: tuple[str, ...] = ()
    x0: Optional[Scalar] = None
    k: int = 1
    k_max: int = 10
    samples: int = 200
    n: int = 3
    kappa_max: float = 0.45
    eps_range: Fraction = Fraction(1, 64)
    grid: int = 64
    jobs: int = 1
    fail_on_breakpoint_hit: bool = False

    def ifs(self) -> IteratedFunctionSystem:
        if not self.maps:
            raise ConfigError(None, "no maps configured")
        return IteratedFunctionSystem(self.maps)

    def pc(self) -> PiecewiseContraction:
        return PiecewiseContraction(
            self.ifs(), Breakpoints(self.breakpoints), self.closures
        )


def _parse_map(tokens: list[str], backend: Backend, line: int) -> MapDescriptor:
    if not tokens:
        raise ConfigError(line, "missing map descriptor")
    kind = tokens.pop(0)

    def number() -> Scalar:
        if not tokens:
            raise ConfigError(line, f"{kind}: missing coefficient")
        tok = tokens.pop(0)
        try:
            return backend.number(tok)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(line, f"bad number {tok!r}: {exc}") from exc

    if kind == "affine":
        return Affine(number(), number())
    if kind == "quadratic":
        return Quadratic(number(), number(), number())
    if kind == "clamped":
        lo, hi = number(), number()
        return Clamped(_parse_map(tokens, backend, line), lo, hi)
    if kind == "composed":
        count_tok = tokens.pop(0) if tokens else ""
        try:
            count = int(count_tok)
        except ValueError as exc:
            raise ConfigError(line, f"composed: bad count {count_tok!r}") from exc
        chain = tuple(_parse_map(tokens, backend, line) for _ in range(count))
        return Composed(chain)
    raise ConfigError(line, f"unknown map kind {kind!r}")


def descriptor_tokens(m: MapDescriptor) -> str:
    """Serialize a descriptor in the grammar the parser accepts."""
    if isinstance(m, Affine):
        return f"affine {format_scalar(m.a)} {format_scalar(m.b)}"
    if isinstance(m, Quadratic):
        return (
            f"quadratic {format_scalar(m.a)} {format_scalar(m.b)} "
            f"{format_scalar(m.c)}"
        )
    if isinstance(m, Clamped):
        return (
            f"clamped {format_scalar(m.lo)} {format_scalar(m.hi)} "
            f"{descriptor_tokens(m.inner)}"
        )
    if isinstance(m, Composed):
        parts = " ".join(descriptor_tokens(c) for c in m.chain)
        return f"composed {len(m.chain)} {parts}"
    raise ValueError(f"cannot serialize {type(m).__name__}")


_INT_KEYS = {
    "seed",
    "max_iter",
    "q_depth_cap",
    "q_size_cap",
    "composition_cap",
    "power_cap",
    "generic_depth",
    "k",
    "k_max",
    "samples",
    "n",
    "grid",
    "jobs",
}
_FLOAT_KEYS = {"eps_cmp", "eps_orbit", "eps_fp", "kappa_max"}


def parse_config(
    text: str,
    backend_override: Optional[str] = None,
    seed_override: Optional[int] = None,
) -> RunConfig:
    """Parse and validate a configuration document.

    Overrides replace the document's ``backend``/``seed`` before scalars
    are interpreted, so a float document can be re-read exactly under the
    exact backend and vice versa.
    """
    lines = []
    for no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((no, stripped.split()))

    backend_name = backend_override
    eps_cmp = None
    if backend_name is None:
        for no, toks in lines:
            if toks[0] == "backend":
                if len(toks) != 2 or toks[1] not in ("exact", "float"):
                    raise ConfigError(no, "backend must be 'exact' or 'float'")
                backend_name = toks[1]
    for no, toks in lines:
        if toks[0] == "eps_cmp":
            try:
                eps_cmp = float(toks[1])
            except (IndexError, ValueError) as exc:
                raise ConfigError(no, "eps_cmp needs a float value") from exc
    if backend_name in (None, "exact"):
        backend = Backend.exact()
    else:
        backend = Backend.floating(eps_cmp if eps_cmp else 1e-12)

    cfg = RunConfig(backend=backend)
    maps: list[MapDescriptor] = []
    for no, toks in lines:
        key, args = toks[0], toks[1:]
        try:
            if key in ("backend", "eps_cmp"):
                continue
            elif key == "map":
                rest = list(args)
                maps.append(_parse_map(rest, backend, no))
                if rest:
                    raise ConfigError(no, f"trailing tokens {rest}")
            elif key == "breakpoints":
                pts = tuple(backend.number(t) for t in args)
                Breakpoints(pts)  # raises on unordered or boundary points
                cfg = replace(cfg, breakpoints=pts)
            elif key == "closures":
                cfg = replace(cfg, closures=tuple(args))
            elif key == "x0":
                x0 = backend.number(args[0])
                if x0 == 1:
                    raise ConfigError(
                        no, "initial condition 1 is outside [0, 1)"
                    )
                cfg = replace(cfg, x0=x0)
            elif key == "eps_range":
                cfg = replace(cfg, eps_range=Fraction(args[0]))
            elif key == "fail_on_breakpoint_hit":
                if args[0] not in ("true", "false"):
                    raise ConfigError(no, "expected true or false")
                cfg = replace(cfg, fail_on_breakpoint_hit=args[0] == "true")
            elif key in _INT_KEYS:
                cfg = replace(cfg, **{key: int(args[0])})
            elif key in _FLOAT_KEYS:
                cfg = replace(cfg, **{key: float(args[0])})
            else:
                raise ConfigError(no, f"unknown key {key!r}")
        except ConfigError:
            raise
        except (IndexError, ValueError, ZeroDivisionError) as exc:
            raise ConfigError(no, f"{key}: {exc}") from exc
    cfg = replace(cfg, maps=tuple(maps))
    if seed_override is not None:
        cfg = replace(cfg, seed=seed_override)

    # invariants that span several keys
    if cfg.maps and cfg.breakpoints:
        map_line = next(no for no, t in lines if t[0] == "map")
        try:
            cfg.pc()
        except ValueError as exc:
            raise ConfigError(map_line, str(exc)) from exc
    return cfg
