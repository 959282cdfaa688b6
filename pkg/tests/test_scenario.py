import io
import json
from pathlib import Path

import numpy as np
import pytest

from sleraman import _backend
from sleraman.errors import ParseError, ValidationError
from sleraman.scenario import dumps, emit_csv, load, loads, parse_delays, to_dict
from sleraman.signals import Spectrum, fsrs_spectra
from sleraman.units import cm_to_rad, fs_to_s

GOLDEN = Path(__file__).parent / "golden" / "regime-I_2fs.csv"


def doc(**overrides):
    d = json.loads(dumps(load("regime-I")))
    for path, value in overrides.items():
        node = d
        keys = path.split("__")
        for k in keys[:-1]:
            node = node[int(k)] if isinstance(node, list) else node[k]
        node[keys[-1]] = value
    return d


# -- presets -----------------------------------------------------------------------

@pytest.mark.parametrize("name, k_last, d1, d2, sigma", [
    ("regime-I", 0.667e12, 3.76e12, 7.51e12, 20.0),
    ("regime-II", 0.333e12, 0.939e12, 3.76e12, 30.0),
])
def test_preset_table_values(name, k_last, d1, d2, sigma):
    sc = load(name)
    assert sc.bath.N == 10
    assert sc.bath.k1.si() == 1.00e12
    assert sc.bath.k_last.si() == k_last
    assert [m.delta.si() for m in sc.modes] == [d1, d1, d2, d2]
    assert all(m.gamma.si() == 1.88e12 for m in sc.modes)
    assert sc.pulses.probe_sigma.value == sigma
    rates = sc.rate_matrix()
    assert rates.forward[0] == 1.00e12 and rates.forward[-1] == k_last


def test_ten_wavenumbers_is_gamma():
    assert float(f"{cm_to_rad(10.0):.3g}") == 1.88e12


def test_regime2_modes_cross():
    sc = load("regime-II")
    m2, m3 = sc.modes[1], sc.modes[2]
    top2 = m2.omega1.si() + 9 * m2.delta.si()
    top3 = m3.omega1.si() + 9 * m3.delta.si()
    assert (m2.omega1.si() - m3.omega1.si()) * (top2 - top3) < 0


@pytest.mark.parametrize("name", ["regime-I", "regime-II"])
def test_round_trip_is_exact(name):
    sc = load(name)
    again = loads(dumps(sc))
    assert again == sc
    assert dumps(again) == dumps(sc)
    assert to_dict(again) == to_dict(sc)


def test_load_from_path(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(dumps(load("regime-II")))
    assert load(str(p)) == load("regime-II")
    assert load(p) == load("regime-II")


def test_unknown_source():
    with pytest.raises(ValidationError):
        load("regime-III")


def test_model_from_scenario(regime1):
    assert regime1.N == 10
    assert regime1.pulses.probe_sigma == fs_to_s(20.0)
    assert regime1.pulses.probe_center_offset == cm_to_rad(-1000.0)
    assert regime1.p0[0] == 1.0


def test_single_state_scenario_needs_no_rates():
    d = doc()
    d["bath"] = {"N": 1}
    sc = loads(json.dumps(d))
    assert sc.rate_matrix().N == 1


# -- validation errors ----------------------------------------------------------------

def test_negative_sigma_rejected():
    with pytest.raises(ValidationError) as info:
        loads(json.dumps(doc(pulses__probeSigma_fs=-20.0)))
    assert info.value.key == "pulses.probeSigma_fs"


def test_unknown_key_rejected():
    d = doc()
    d["modes"][0]["colour"] = "red"
    with pytest.raises(ValidationError) as info:
        loads(json.dumps(d))
    assert info.value.key == "modes[0].colour"


def test_duplicate_key_rejected():
    text = dumps(load("regime-I")).replace('"N": 10,', '"N": 10,\n    "N": 9,')
    with pytest.raises(ValidationError):
        loads(text)


def test_quantity_in_two_units_rejected():
    d = doc()
    d["modes"][0]["omega1_rad_per_s"] = 1.5e14
    with pytest.raises(ValidationError):
        loads(json.dumps(d))


@pytest.mark.parametrize("key, value", [
    ("bath__N", 0), ("bath__N", 2.5), ("bath__initialState", 11),
    ("grid__step_cm", 0.0), ("evaluation__path", "fft"), ("pulses__pumpShiftConvention", "left"),
    ("delays", "2xs"), ("modes__0__alpha", "big"),
])
def test_constraint_violations(key, value):
    with pytest.raises(ValidationError):
        loads(json.dumps(doc(**{key: value})))


def test_json_syntax_error_has_position():
    text = '{\n  "bath": {"N": 10,,}\n}'
    with pytest.raises(ParseError) as info:
        loads(text)
    assert info.value.line == 2
    assert info.value.column == 20


def test_delay_list_form():
    sc = loads(json.dumps(doc(delays=["2fs", "1ps:2ps:500fs"])))
    np.testing.assert_allclose(sc.delay_values(), [2e-15, 1e-12, 1.5e-12, 2e-12])


# -- delay grammar ----------------------------------------------------------------------

def test_figure4_schedule():
    d = parse_delays("2fs,500fs:10ps:500fs,11ps:15ps:1ps")
    assert len(d) == 26
    assert d[0] == fs_to_s(2.0)
    np.testing.assert_allclose(d[1:21], np.arange(1, 21) * 0.5e-12, rtol=1e-12)
    np.testing.assert_allclose(d[21:], np.arange(11, 16) * 1e-12, rtol=1e-12)


def test_figure5_schedule():
    d = parse_delays("50fs:950fs:50fs")
    assert len(d) == 19
    np.testing.assert_allclose(d, np.arange(1, 20) * 50e-15, rtol=1e-12)


def test_preset_delays():
    assert len(load("regime-I").delay_values()) == 26


@pytest.mark.parametrize("text, expected", [
    ("0", [0.0]), ("1.5ps", [1.5e-12]), (" 3fs , 4fs ", [3e-15, 4e-15]), ("1e3fs", [1e-12]),
    ("0:100fs:50fs", [0.0, 5e-14, 1e-13]),
])
def test_delay_items(text, expected):
    np.testing.assert_allclose(parse_delays(text), expected, rtol=1e-12, atol=0)


@pytest.mark.parametrize("text, column", [
    ("5", 1), ("2fs,abc", 5), ("1ps:2ps", 1), ("1ps:2ps:0fs", 1), ("2ps:1ps:1fs", 1),
    ("1fs,2fs:3fs:x", 13), ("", 1),
])
def test_delay_errors(text, column):
    with pytest.raises(ParseError) as info:
        parse_delays(text)
    assert info.value.line == 1
    assert info.value.column == column


# -- CSV ------------------------------------------------------------------------------------

def _spec(n, T=0.0):
    return Spectrum(np.arange(n, dtype=float), T, np.linspace(-1, 1, n))


def test_csv_three_points():
    buf = io.BytesIO()
    count = emit_csv([_spec(3)], buf)
    data = buf.getvalue()
    assert count == len(data)
    lines = data.decode().split("\n")
    assert lines[0] == "raman_shift_cm,delay_fs,intensity,path"
    assert len(lines) == 5 and lines[-1] == ""
    assert b"\r" not in data
    assert lines[1] == "0,0,-1,analytic"


def test_csv_two_delays():
    buf = io.BytesIO()
    emit_csv([_spec(7, 0.0), _spec(7, 1e-12)], buf)
    lines = buf.getvalue().decode().splitlines()
    assert len(lines) == 1 + 2 * 7
    assert lines[8].split(",")[1] == "1000"


def test_csv_static_column():
    buf = io.BytesIO()
    emit_csv([_spec(2)], buf, static=[_spec(2)])
    assert buf.getvalue().decode().splitlines()[0].endswith(",static_intensity")


def test_csv_rejects_mixed_grids():
    with pytest.raises(ValueError):
        emit_csv([_spec(2), _spec(3)], io.BytesIO())
    with pytest.raises(ValueError):
        emit_csv([], io.BytesIO())


def test_csv_normalizes_negative_zero():
    buf = io.BytesIO()
    emit_csv([Spectrum(np.array([0.0]), 0.0, np.array([-0.0]))], buf)
    assert buf.getvalue().decode().splitlines()[1] == "0,0,0,analytic"


def _golden_run():
    sc = load("regime-I")
    buf = io.BytesIO()
    emit_csv(fsrs_spectra(sc.model(), sc.grid.shifts(), [fs_to_s(2.0)]), buf)
    return buf.getvalue()


@pytest.mark.skipif("cython" not in _backend.available(), reason="golden bytes come from the compiled core")
def test_golden_bytes():
    previous = _backend.NAME
    _backend.select("cython")
    try:
        assert _golden_run() == GOLDEN.read_bytes()
    finally:
        _backend.select(previous)


def test_golden_values(backend):
    # the fallback may round the ninth digit differently
    got = np.loadtxt(io.BytesIO(_golden_run()), delimiter=",", skiprows=1, usecols=(0, 1, 2))
    ref = np.loadtxt(GOLDEN, delimiter=",", skiprows=1, usecols=(0, 1, 2))
    assert got.shape == ref.shape == (1201, 3)
    np.testing.assert_array_equal(got[:, :2], ref[:, :2])
    np.testing.assert_allclose(got[:, 2], ref[:, 2], rtol=2e-9, atol=1e-9 * np.abs(ref[:, 2]).max())
