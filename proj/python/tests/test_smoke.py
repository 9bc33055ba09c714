import math

import pytest

import cutfsi


def test_csv_columns():
    assert cutfsi.CSV_COLUMNS == (
        "t", "dt", "hx", "hy", "vx", "vy", "theta", "omega",
        "Fx", "Fy", "T", "newton_iters", "n_cut",
    )


def test_default_config_is_the_benchmark():
    c = cutfsi.Config()
    assert (c.nx, c.ny) == (50, 150)
    assert c.rho_s == 1.25 and c.nu == 0.1 and c.g == 981.0
    assert c.center == (1.0, 4.0)


def test_bad_config_is_rejected():
    with pytest.raises(ValueError):
        cutfsi.Config({"nu": -1})
    with pytest.raises(KeyError):
        cutfsi.Config({"bogus": 1})


def test_clip_triangle():
    cell = cutfsi.clip_triangle([[0, 0], [1, 0], [0, 1]], [-0.5, 0.5, -0.5])
    assert cell["fluid_area"] == pytest.approx(0.125)
    assert cell["segment_length"] == pytest.approx(0.5)


def test_cut_geometry_converges():
    g = cutfsi.cut_geometry(100, 300)
    r = 0.125
    assert abs(g["interface_length"] - 2 * math.pi * r) < 1e-3 * 2 * math.pi * r
    assert abs(g["fluid_area"] - (12 - math.pi * r * r)) < 1e-3 * 12


def test_short_fall(tmp_path):
    sim = cutfsi.Simulation(cutfsi.Config({"mesh": "10x30", "t_final": 0.003}))
    seen = []
    records = sim.run(lambda r: seen.append(r["t"]))
    assert len(records) == len(seen) >= 2
    assert records[-1]["vy"] < 0
    assert sim.multipliers.shape == (records[-1]["n_cut"], 2)
    path = tmp_path / "records.csv"
    cutfsi.write_csv(records, str(path))
    assert path.read_text().splitlines()[0] == cutfsi.CSV_HEADER
    assert cutfsi.read_csv(str(path)) == records


def test_stokes_verify_small():
    rows = cutfsi.stokes_verify(cutfsi.Config({"verify_meshes": "8,16"}))
    assert len(rows) == 2
    assert rows[1]["err_u"] < rows[0]["err_u"]
