"""Scenario files, built-in presets and CSV output.

Scenarios are JSON documents.  Every dimensional key carries its unit as a
suffix (``_cm``, ``_rad_per_s``, ``_per_s``, ``_fs``); a quantity may be given
in whichever listed unit is convenient and is written back in the same unit,
so presets round-trip bit for bit.  Unknown keys are errors.
"""

import io
import json
import os
import re
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import ParseError, ValidationError
from .kinetics import RateMatrix, build_chain, initial_state
from .pulses import PulseSet
from .signals import PATHS
from .sle import SLEModel, VibrationalMode
from .units import cm_to_rad, fs_to_s, s_to_fs

PRESETS = ("regime-I", "regime-II")

_FREQ_UNITS = {"cm": cm_to_rad, "rad_per_s": float}
_RATE_UNITS = {"per_s": float}
_TIME_UNITS = {"fs": fs_to_s}


@dataclass(frozen=True)
class Quantity:
    """A value together with the unit suffix it was written in."""

    value: float
    unit: str

    def si(self):
        table = {**_FREQ_UNITS, **_RATE_UNITS, **_TIME_UNITS}
        return table[self.unit](self.value)


@dataclass(frozen=True)
class BathSpec:
    N: int
    k1: Quantity = None
    k_last: Quantity = None
    backward_ratio: float = 0.1
    initial_state: int = 1


@dataclass(frozen=True)
class ModeSpec:
    omega1: Quantity
    delta: Quantity
    gamma: Quantity
    alpha: float = 1.0
    mu: float = 1.0
    mu_ac: float = 1.0


@dataclass(frozen=True)
class PulseSpec:
    probe_sigma: Quantity
    probe_center_offset: Quantity = Quantity(-1000.0, "cm")
    pump_shift_convention: str = "stokes"


@dataclass(frozen=True)
class GridSpec:
    shift_min: float = 600.0
    shift_max: float = 1800.0
    step: float = 1.0

    def shifts(self):
        n = int(np.floor((self.shift_max - self.shift_min) / self.step + 1e-9)) + 1
        return self.shift_min + self.step * np.arange(n)


@dataclass(frozen=True)
class EvaluationSpec:
    path: str = "analytic"
    rtol: float = 1e-10


@dataclass(frozen=True)
class Scenario:
    name: str
    bath: BathSpec
    modes: tuple
    pulses: PulseSpec
    grid: GridSpec = field(default_factory=GridSpec)
    delays: str = "2fs"
    evaluation: EvaluationSpec = field(default_factory=EvaluationSpec)

    def delay_values(self):
        """Delays in seconds."""
        return parse_delays(self.delays)

    def rate_matrix(self):
        b = self.bath
        if b.N == 1:
            return RateMatrix.static(1)
        return build_chain(b.N, b.k1.si(), b.k_last.si(), b.backward_ratio)

    def model(self):
        pulses = PulseSet(
            probe_sigma=self.pulses.probe_sigma.si(),
            probe_center_offset=self.pulses.probe_center_offset.si(),
            shift_convention=self.pulses.pump_shift_convention,
        )
        modes = tuple(
            VibrationalMode(m.omega1.si(), m.delta.si(), m.gamma.si(), m.alpha, m.mu, m.mu_ac)
            for m in self.modes
        )
        p0 = initial_state(self.bath.N, self.bath.initial_state - 1)
        return SLEModel(self.rate_matrix(), modes, pulses, p0, label=self.name)


# -- delay grammar -------------------------------------------------------------

_TIME_RE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*(fs|ps)?\s*$")


def _parse_time(text, column):
    m = _TIME_RE.match(text)
    if not m:
        raise ParseError(f"cannot read time {text.strip()!r}", line=1, column=column)
    value = float(m.group(1))
    unit = m.group(2)
    if unit is None:
        if value != 0.0:
            raise ParseError(f"time {text.strip()!r} needs a unit (fs or ps)", line=1, column=column)
        return 0.0
    return value * (1.0 if unit == "fs" else 1000.0)


def parse_delays(spec):
    """Expand ``"2fs,500fs:10ps:500fs"``-style lists into delays in seconds.

    Each comma item is a time or an inclusive ``start:stop:step`` span.
    Bare ``0`` is accepted without a unit.
    """
    if not isinstance(spec, str) or not spec.strip():
        raise ParseError("empty delay specification", line=1, column=1)
    out = []
    col = 1
    for item in spec.split(","):
        parts = item.split(":")
        if len(parts) == 1:
            out.append(_parse_time(item, col))
        elif len(parts) == 3:
            pcol = col
            vals = []
            for p in parts:
                vals.append(_parse_time(p, pcol))
                pcol += len(p) + 1
            start, stop, step = vals
            if step <= 0:
                raise ParseError(f"span step must be positive in {item.strip()!r}", line=1, column=col)
            if stop < start:
                raise ParseError(f"span end precedes its start in {item.strip()!r}", line=1, column=col)
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            out.extend(round(start + k * step, 9) for k in range(count))
        else:
            raise ParseError(f"malformed span {item.strip()!r}; expected start:stop:step",
                             line=1, column=col)
        col += len(item) + 1
    return np.array([fs_to_s(t) for t in out])


# -- loading -------------------------------------------------------------------

def _no_duplicates(pairs):
    seen = {}
    for k, v in pairs:
        if k in seen:
            raise ValidationError(k, "duplicate key")
        seen[k] = v
    return seen


def _check_keys(obj, where, allowed):
    if not isinstance(obj, dict):
        raise ValidationError(where, "must be an object")
    for k in obj:
        if k not in allowed:
            raise ValidationError(f"{where}.{k}" if where else k, "unknown key")


def _number(obj, key, where, default=None, positive=False, nonnegative=False):
    full = f"{where}.{key}"
    if key not in obj:
        if default is None:
            raise ValidationError(full, "required")
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not np.isfinite(v):
        raise ValidationError(full, "must be a finite number")
    if positive and not v > 0:
        raise ValidationError(full, "must be > 0")
    if nonnegative and not v >= 0:
        raise ValidationError(full, "must be >= 0")
    return float(v)


def _quantity(obj, base, units, where, required=True, default=None, positive=False):
    present = [u for u in units if f"{base}_{u}" in obj]
    if len(present) > 1:
        raise ValidationError(f"{where}.{base}", "given in more than one unit")
    if not present:
        if required:
            raise ValidationError(f"{where}.{base}_{units[0]}", "required")
        return default
    unit = present[0]
    value = _number(obj, f"{base}_{unit}", where, positive=positive)
    return Quantity(value, unit)


def _qkeys(base, units):
    return {f"{base}_{u}" for u in units}


def _build(doc):
    top = {"name", "bath", "modes", "pulses", "grid", "delays", "evaluation"}
    _check_keys(doc, "", top)
    for req in ("bath", "modes", "pulses"):
        if req not in doc:
            raise ValidationError(req, "required")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise ValidationError("name", "must be a string")

    b = doc["bath"]
    _check_keys(b, "bath", {"N", "backwardRatio", "initialState"}
                | _qkeys("k1", _RATE_UNITS) | _qkeys("k_last", _RATE_UNITS))
    n = b.get("N")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError("bath.N", "must be an integer >= 1")
    if n == 1:
        k1 = _quantity(b, "k1", tuple(_RATE_UNITS), "bath", required=False, positive=True)
        kl = _quantity(b, "k_last", tuple(_RATE_UNITS), "bath", required=False, positive=True)
    else:
        k1 = _quantity(b, "k1", tuple(_RATE_UNITS), "bath", positive=True)
        kl = _quantity(b, "k_last", tuple(_RATE_UNITS), "bath", positive=True)
        if n == 2 and k1.value != kl.value:
            raise ValidationError("bath.k_last_per_s", "must equal k1 for a two-state chain")
    ratio = _number(b, "backwardRatio", "bath", default=0.1, nonnegative=True)
    init = b.get("initialState", 1)
    if isinstance(init, bool) or not isinstance(init, int) or not 1 <= init <= n:
        raise ValidationError("bath.initialState", f"must be an integer in 1..{n}")
    bath = BathSpec(n, k1, kl, ratio, init)

    modes_doc = doc["modes"]
    if not isinstance(modes_doc, list) or not modes_doc:
        raise ValidationError("modes", "must be a nonempty list")
    modes = []
    fu = tuple(_FREQ_UNITS)
    for i, m in enumerate(modes_doc):
        where = f"modes[{i}]"
        _check_keys(m, where, {"alpha", "mu", "mu_ac"} | _qkeys("omega1", fu)
                    | _qkeys("delta", fu) | _qkeys("gamma", fu))
        modes.append(ModeSpec(
            omega1=_quantity(m, "omega1", fu, where, positive=True),
            delta=_quantity(m, "delta", fu, where),
            gamma=_quantity(m, "gamma", fu, where, positive=True),
            alpha=_number(m, "alpha", where, default=1.0),
            mu=_number(m, "mu", where, default=1.0),
            mu_ac=_number(m, "mu_ac", where, default=1.0),
        ))

    p = doc["pulses"]
    _check_keys(p, "pulses", {"pumpShiftConvention"} | _qkeys("probeSigma", _TIME_UNITS)
                | _qkeys("probeCenterOffset", fu))
    conv = p.get("pumpShiftConvention", "stokes")
    if conv not in ("stokes", "mirror"):
        raise ValidationError("pulses.pumpShiftConvention", "must be 'stokes' or 'mirror'")
    pulses = PulseSpec(
        probe_sigma=_quantity(p, "probeSigma", tuple(_TIME_UNITS), "pulses", positive=True),
        probe_center_offset=_quantity(p, "probeCenterOffset", fu, "pulses", required=False,
                                      default=Quantity(-1000.0, "cm")),
        pump_shift_convention=conv,
    )

    g = doc.get("grid", {})
    _check_keys(g, "grid", {"shiftMin_cm", "shiftMax_cm", "step_cm"})
    grid = GridSpec(
        _number(g, "shiftMin_cm", "grid", default=600.0),
        _number(g, "shiftMax_cm", "grid", default=1800.0),
        _number(g, "step_cm", "grid", default=1.0, positive=True),
    )
    if not grid.shift_max > grid.shift_min:
        raise ValidationError("grid.shiftMax_cm", "must exceed shiftMin_cm")

    delays = doc.get("delays", "2fs")
    if isinstance(delays, list):
        if not delays or not all(isinstance(d, str) for d in delays):
            raise ValidationError("delays", "must be a nonempty list of strings")
        delays = ",".join(delays)
    if not isinstance(delays, str):
        raise ValidationError("delays", "must be a string or list of strings")
    try:
        parse_delays(delays)
    except ParseError as exc:
        raise ValidationError("delays", str(exc)) from None

    e = doc.get("evaluation", {})
    _check_keys(e, "evaluation", {"path", "rtol"})
    path = e.get("path", "analytic")
    if path not in PATHS:
        raise ValidationError("evaluation.path", f"must be one of {', '.join(PATHS)}")
    evaluation = EvaluationSpec(path, _number(e, "rtol", "evaluation", default=1e-10, positive=True))
    return Scenario(name, bath, tuple(modes), pulses, grid, delays, evaluation)


def loads(text):
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return _build(doc)


def load(source):
    """Load a preset name, a file path or JSON text.

    Raises
    ------
    ParseError
        Malformed JSON or delay list, with line and column.
    ValidationError
        Schema violations, naming the offending key.
    """
    if source in PRESETS:
        text = resources.files("sleraman").joinpath("presets", f"{source}.json").read_text()
        return loads(text)
    if isinstance(source, str) and source.lstrip().startswith("{"):
        return loads(source)
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            return loads(fh.read())
    raise ValidationError("scenario", f"no preset or file named {str(source)!r}")


def _qdump(q, base, out):
    if q is not None:
        out[f"{base}_{q.unit}"] = q.value


def to_dict(sc):
    bath = {"N": sc.bath.N}
    _qdump(sc.bath.k1, "k1", bath)
    _qdump(sc.bath.k_last, "k_last", bath)
    bath["backwardRatio"] = sc.bath.backward_ratio
    bath["initialState"] = sc.bath.initial_state
    modes = []
    for m in sc.modes:
        d = {}
        _qdump(m.omega1, "omega1", d)
        _qdump(m.delta, "delta", d)
        _qdump(m.gamma, "gamma", d)
        d.update(alpha=m.alpha, mu=m.mu, mu_ac=m.mu_ac)
        modes.append(d)
    pulses = {}
    _qdump(sc.pulses.probe_sigma, "probeSigma", pulses)
    _qdump(sc.pulses.probe_center_offset, "probeCenterOffset", pulses)
    pulses["pumpShiftConvention"] = sc.pulses.pump_shift_convention
    return {
        "name": sc.name,
        "bath": bath,
        "modes": modes,
        "pulses": pulses,
        "grid": {"shiftMin_cm": sc.grid.shift_min, "shiftMax_cm": sc.grid.shift_max,
                 "step_cm": sc.grid.step},
        "delays": sc.delays,
        "evaluation": {"path": sc.evaluation.path, "rtol": sc.evaluation.rtol},
    }


def dumps(sc):
    return json.dumps(to_dict(sc), indent=2) + "\n"


# -- CSV -------------------------------------------------------------------------

def _fmt(x):
    return f"{float(x) + 0.0:.9g}"


def emit_csv(spectra, sink, static=None):
    """Write spectra as CSV; returns the byte count.

    Rows run delay-major, shift-minor.  ``static`` adds a
    ``static_intensity`` column from matching static-limit spectra.
    """
    spectra = list(spectra)
    if not spectra:
        raise ValueError("nothing to write")
    grid = spectra[0].shifts_cm
    for s in spectra:
        if s.shifts_cm.shape != grid.shape or np.any(s.shifts_cm != grid):
            raise ValueError("all spectra must share one shift grid")
    if static is not None:
        static = list(static)
        if len(static) != len(spectra):
            raise ValueError("one static spectrum per delay")
    buf = io.StringIO(newline="")
    header = "raman_shift_cm,delay_fs,intensity,path"
    buf.write(header + (",static_intensity" if static is not None else "") + "\n")
    for k, s in enumerate(spectra):
        delay = _fmt(s_to_fs(s.delay))
        for i, (x, v) in enumerate(zip(s.shifts_cm, s.values)):
            row = f"{_fmt(x)},{delay},{_fmt(v)},{s.path}"
            if static is not None:
                row += f",{_fmt(static[k].values[i])}"
            buf.write(row + "\n")
    data = buf.getvalue().encode("ascii")
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "wb") as fh:
            fh.write(data)
    elif isinstance(sink, io.TextIOBase):
        sink.write(data.decode("ascii"))
    else:
        sink.write(data)
    return len(data)
