"""Tests for command reports and the discrepancy CSV."""

import io
import json

import numpy as np
import pytest

from lowdisc_maps import report as report_module
from lowdisc_maps.config import Schedule, build_config
from lowdisc_maps.discrepancy import Box
from lowdisc_maps.errors import InputError
from lowdisc_maps.interval_maps import DEFAULT_ORBIT_DEPTH
from lowdisc_maps.report import (
    CSV_COLUMNS,
    DiscrepancyRow,
    basis_column,
    fit_payload,
    fit_rows,
    measure_prefixes,
    n_schedule,
    read_discrepancy_csv,
    render_spectrum,
    render_verify,
    spectrum_payload,
    spectrum_verdict,
    verify_payload,
    write_discrepancy_csv,
)
from lowdisc_maps.spectral import Verdict
from lowdisc_maps.verify import CheckResult

VDC_7 = np.array([[0.5], [0.25], [0.75], [0.125], [0.625], [0.375], [0.875]])


class TestSchedule:
    """Tests for n_schedule() and basis_column()."""

    def test_levels(self):
        """Whole levels give cumulative sizes."""
        assert n_schedule(7, Schedule.LEVELS, [1, 2, 4]) == [1, 3, 7]

    def test_levels_capped(self):
        """Prefixes longer than the file are dropped."""
        assert n_schedule(5, Schedule.LEVELS, [1, 2, 4]) == [1, 3]

    def test_levels_without_sizes(self):
        """Without level sizes powers of 2 are used."""
        assert n_schedule(10, Schedule.LEVELS) == [1, 2, 4, 8]

    def test_powers(self):
        """Powers of 2 and 4 up to the total."""
        assert n_schedule(16, Schedule.POW2) == [1, 2, 4, 8, 16]
        assert n_schedule(20, Schedule.POW4) == [1, 4, 16]

    def test_no_points(self):
        """There must be something to measure."""
        with pytest.raises(InputError):
            n_schedule(0, Schedule.POW2)

    def test_basis(self):
        """D_star where it is exact, D_dyadic otherwise."""
        assert basis_column(1, [100], 5) == "D_star"
        assert basis_column(2, [100], 5) == "D_star"
        assert basis_column(2, [50_000], 5) == "D_dyadic"
        assert basis_column(2, [50_000], None) == "D_star"
        assert basis_column(3, [10], 3) == "D_dyadic"

    def test_basis_3d_needs_grid(self):
        """3D has no exact star discrepancy."""
        with pytest.raises(InputError, match="dyadic"):
            basis_column(3, [10], None)


class TestMeasurePrefixes:
    """Tests for measure_prefixes() and fit_rows()."""

    @pytest.fixture
    def config(self):
        return build_config(dyadic_k=3)

    def test_classic_prefixes(self, config):
        """D* of 1, 3 and 7 van der Corput points."""
        rows = measure_prefixes(VDC_7, config, [1, 3, 7])
        assert [r.n for r in rows] == [1, 3, 7]
        assert [r.star for r in rows] == pytest.approx([0.5, 0.25, 0.125])
        assert rows[0].constant is None
        assert rows[2].constant == pytest.approx(7 * 0.125 / np.log2(7))
        assert all(r.extreme is not None and r.dyadic is not None for r in rows)

    def test_extreme_cap(self):
        """Prefixes above the cap skip the quadratic scan."""
        rows = measure_prefixes(VDC_7, build_config(extreme_cap=3), [3, 7])
        assert rows[0].extreme is not None
        assert rows[1].extreme is None

    def test_without_dyadic(self, config):
        """The dyadic column can be switched off."""
        rows = measure_prefixes(VDC_7, config.model_copy(update={"dyadic_k": None}), [7])
        assert rows[0].dyadic is None

    def test_three_dimensions_use_dyadic(self):
        """3D rows are measured on the dyadic grid only."""
        coords = np.array([[0.1, 0.2, 0.3], [0.6, 0.7, 0.8]])
        rows = measure_prefixes(coords, build_config(dyadic_k=1), [2])
        assert rows[0].star is None
        assert rows[0].constant == pytest.approx(2 * rows[0].dyadic)
        assert rows[0].witness is not None

    def test_fit(self, config):
        """Rows with N >= 2 are fitted."""
        rows = measure_prefixes(VDC_7, config, [1, 3, 7])
        fit = fit_rows(rows, "D_star", config)
        assert fit is not None
        assert fit.ns == (3, 7)
        assert fit_payload(fit, "D_star")["column"] == "D_star"

    def test_fit_needs_two_rows(self, config):
        """A single usable prefix gives no fit."""
        rows = measure_prefixes(VDC_7, config, [1, 3])
        assert fit_rows(rows, "D_star", config) is None


class TestDiscrepancyCsv:
    """Tests for writing and reading discrepancy tables."""

    def _rows(self):
        return [
            DiscrepancyRow(3, 0.25, 0.5, None, 0.47, Box((0.0,), (0.25,), closed=True)),
            DiscrepancyRow(7, 0.125, 0.25, 0.1, 0.31, None),
        ]

    def test_layout(self):
        """Sorted header, column row, then data rows."""
        out = io.StringIO()
        write_discrepancy_csv(out, {"map": "doubling", "dim": 1}, self._rows(), None)
        lines = out.getvalue().splitlines()
        assert lines[:2] == ["# dim: 1", "# map: doubling"]
        assert lines[2] == ",".join(CSV_COLUMNS)
        assert lines[3] == '3,0.25,0.5,,0.46999999999999997,"[0, 0.25]"'

    def test_read_back(self, tmp_path):
        """Columns and the fitted basis come back from the file."""
        config = build_config()
        rows = measure_prefixes(VDC_7, config, [1, 3, 7])
        fit = fit_rows(rows, "D_star", config)
        path = tmp_path / "disc.csv"
        with path.open("w", encoding="utf-8") as stream:
            write_discrepancy_csv(stream, {"basis": "D_star"}, rows, fit, "D_star")
        table = read_discrepancy_csv(path)
        assert table.default_column == "D_star"
        assert table.header["growth_fit.log_base"] == "2.0"
        ns, ds = table.column("D_star")
        assert ns == [1, 3, 7]
        assert ds == pytest.approx([0.5, 0.25, 0.125])

    def test_sparse_column(self, tmp_path):
        """Empty cells are skipped."""
        path = tmp_path / "disc.csv"
        with path.open("w", encoding="utf-8") as stream:
            write_discrepancy_csv(stream, {}, self._rows(), None)
        assert read_discrepancy_csv(path).column("D_dyadic") == ([7], [0.1])

    @pytest.mark.parametrize("name", ["N", "witness", "D_other"])
    def test_unfittable_columns(self, tmp_path, name):
        """Only value columns can be fitted."""
        path = tmp_path / "disc.csv"
        with path.open("w", encoding="utf-8") as stream:
            write_discrepancy_csv(stream, {}, self._rows(), None)
        with pytest.raises(InputError):
            read_discrepancy_csv(path).column(name)

    def test_missing(self, tmp_path):
        """A missing file is an input error."""
        with pytest.raises(InputError, match="not found"):
            read_discrepancy_csv(tmp_path / "nope.csv")

    def test_no_table(self, tmp_path):
        """Header lines alone are not a table."""
        path = tmp_path / "disc.csv"
        path.write_text("# map: doubling\n", encoding="utf-8")
        with pytest.raises(InputError, match="no discrepancy table"):
            read_discrepancy_csv(path)


class TestSpectrumPayload:
    """Tests for spectrum_payload()."""

    def test_doubling(self, doubling):
        """The doubling map is certified and JSON-ready."""
        payload = spectrum_payload(doubling, 12, DEFAULT_ORBIT_DEPTH)
        assert payload["markov"] is True
        assert payload["spectrum"]["certificate"] is True
        assert payload["spectrum"]["multiplicity_at_one"] == 1
        assert payload["invariant_density"]["values"] == pytest.approx([1.0, 1.0])
        assert payload["zeta_residual"] < 1e-9
        assert payload["zeta_bound"]["coefficients"][0] == pytest.approx(1.0)
        json.dumps(payload)

    def test_two_block(self, two_block):
        """A non-ergodic map carries a density note instead of a density."""
        payload = spectrum_payload(two_block, 12, DEFAULT_ORBIT_DEPTH)
        assert payload["spectrum"]["certificate"] is False
        assert payload["invariant_density"] is None
        assert "2 ergodic components" in payload["density_note"]

    def test_non_markov(self, beta_19):
        """Markov-only fields stay empty for beta = 1.9."""
        payload = spectrum_payload(beta_19, 12, DEFAULT_ORBIT_DEPTH)
        assert payload["markov"] is False
        assert payload["transition"] is None
        assert payload["spectrum"] is None
        assert payload["non_markov_endpoints"] == ["1+"]
        assert spectrum_verdict(payload) in set(Verdict)

    def test_orbit_depth_reaches_certificate(self, doubling, monkeypatch):
        """The orbit depth is handed to the endpoint minor certificate."""
        seen = {}
        certify = report_module.markov_minor_certificate

        def recording(fmap, degree, **kwargs):
            seen.update(kwargs)
            return certify(fmap, degree, **kwargs)

        monkeypatch.setattr(report_module, "markov_minor_certificate", recording)
        payload = spectrum_payload(doubling, 12, 7)
        assert seen == {"orbit_depth": 7}
        assert payload["minor_certificate"]["verdict"] == "true"

    def test_render(self, doubling, capsys):
        """The table view names the certificate."""
        render_spectrum(spectrum_payload(doubling, 12, DEFAULT_ORBIT_DEPTH))
        out = capsys.readouterr().out
        assert "spectral certificate" in out
        assert "doubling" in out


class TestVerifyPayload:
    """Tests for verify reports."""

    def test_payload(self):
        """One failure fails the run."""
        results = [CheckResult("a", True, "fine"), CheckResult("b", False, "broken")]
        payload = verify_payload(results)
        assert payload["passed"] is False
        assert payload["checks"][1] == {"name": "b", "passed": False, "detail": "broken"}

    def test_render(self, capsys):
        """The summary counts passing checks."""
        render_verify([CheckResult("a", True), CheckResult("b", True)])
        assert "2/2 checks passed" in capsys.readouterr().out
