import io
import re

import pytest

from sepcorr.errors import InvalidSpecError
from sepcorr.states import ppt_check, random_separable
from sepcorr.sweep import (
    CSV_HEADER,
    SweepConfig,
    per_record_seeds,
    run_sweep,
    splitmix64,
    summary_line,
    write_csv,
)


def _csv_text(cfg, append=False):
    records, _ = run_sweep(cfg, append_counterexample=append)
    buf = io.StringIO()
    write_csv(records, cfg, buf, append_counterexample=append)
    return buf.getvalue()


class TestConfig:
    def test_rejects_zero_states(self):
        with pytest.raises(InvalidSpecError):
            SweepConfig(n=0, master_seed=1)

    def test_rejects_bad_k_bounds(self):
        with pytest.raises(InvalidSpecError):
            SweepConfig(n=1, master_seed=1, k_min=3, k_max=2)
        with pytest.raises(InvalidSpecError):
            SweepConfig(n=1, master_seed=1, k_min=1, k_max=9)

    def test_rejects_small_grid(self):
        with pytest.raises(InvalidSpecError):
            SweepConfig(n=1, master_seed=1, grid_n=4)

    def test_master_seed_wraps_to_64_bits(self):
        cfg = SweepConfig(n=1, master_seed=-1)
        assert cfg.master_seed == (1 << 64) - 1


class TestSeedDerivation:
    def test_splitmix_reference_values(self):
        # reference outputs of SplitMix64 seeded with 0 (widely published)
        assert splitmix64(0, 0) == 0xE220A8397B1DCDAF
        assert splitmix64(0, 1) == 0x6E789E6AA1B965F4
        assert splitmix64(0, 2) == 0x06C45D188009454F

    def test_rows_are_rerunnable_in_isolation(self):
        cfg = SweepConfig(n=4, master_seed=11, k_min=1, k_max=3, grid_n=8)
        records, _ = run_sweep(cfg)
        for rec in records:
            seed_k, seed_state = per_record_seeds(cfg.master_seed, rec.index)
            assert rec.seed == seed_state
            assert rec.k == cfg.k_min + seed_k % (cfg.k_max - cfg.k_min + 1)
            rho, _ = random_separable(seed_state, rec.k)
            assert ppt_check(rho).min_eigenvalue == rec.ppt_min_eig


class TestRunSweep:
    def test_single_product_state_record(self):
        cfg = SweepConfig(n=1, master_seed=0, k_min=1, k_max=1, grid_n=8)
        records, summary = run_sweep(cfg)
        rec = records[0]
        assert rec.k == 1
        for val in (rec.t, rec.q, rec.c, rec.l):
            assert abs(val) <= 1e-9
        assert summary.violations == 0

    def test_records_in_index_order_with_bounded_k(self):
        cfg = SweepConfig(n=12, master_seed=5, k_min=2, k_max=4, grid_n=8)
        records, _ = run_sweep(cfg)
        assert [r.index for r in records] == list(range(12))
        assert all(2 <= r.k <= 4 for r in records)

    def test_summary_bounds(self):
        cfg = SweepConfig(n=16, master_seed=3, grid_n=8)
        records, summary = run_sweep(cfg)
        assert summary.violations == 0
        assert summary.min_l >= -1e-9
        assert summary.max_residual <= 1e-8
        assert all(r.ppt_min_eig >= -1e-10 for r in records)

    def test_bell_diagonal_rows(self):
        cfg = SweepConfig(n=8, master_seed=9, grid_n=8, include_bell_diagonal=True)
        records, _ = run_sweep(cfg)
        bell_rows = [r for r in records if r.index % 4 == 3]
        assert bell_rows and all(r.k == 0 for r in bell_rows)
        assert all(r.k >= 1 for r in records if r.index % 4 != 3)
        assert all(r.ppt_min_eig >= -1e-10 for r in records)

    def test_appended_counterexample_row(self):
        cfg = SweepConfig(n=2, master_seed=1, grid_n=16)
        records, _ = run_sweep(cfg, append_counterexample=True)
        last = records[-1]
        assert (last.index, last.seed, last.k) == (2, 0, 2)
        assert abs(last.l - 0.2104) <= 1e-3


class TestCsv:
    def test_header_line_exact(self):
        text = _csv_text(SweepConfig(n=1, master_seed=0, k_min=1, k_max=1, grid_n=8))
        lines = text.splitlines()
        comments = [ln for ln in lines if ln.startswith("#")]
        assert comments and "sepcorr" in comments[0]
        assert any("prng=" in ln for ln in comments)
        assert any("config" in ln and "master_seed=0" in ln for ln in comments)
        assert lines[len(comments)] == CSV_HEADER

    def test_determinism_byte_identical(self):
        cfg = SweepConfig(n=6, master_seed=21, grid_n=8, include_bell_diagonal=True)
        assert _csv_text(cfg, append=True) == _csv_text(cfg, append=True)

    def test_lf_endings_and_12_digit_reals(self):
        text = _csv_text(SweepConfig(n=2, master_seed=4, grid_n=8))
        assert "\r" not in text
        rows = [ln for ln in text.splitlines() if not ln.startswith("#")][1:]
        for row in rows:
            for field in row.split(",")[3:]:
                assert re.fullmatch(r"-?\d+(\.\d+)?(e[+-]?\d+)?", field)
                mantissa = field.lstrip("-").split("e")[0].replace(".", "").lstrip("0")
                assert len(mantissa) <= 12

    def test_summary_line_format(self):
        _, summary = run_sweep(SweepConfig(n=2, master_seed=4, grid_n=8))
        line = summary_line(summary)
        assert re.fullmatch(
            r"violations=\d+ min_l=-?[\d.e+-]+ max_residual=-?[\d.e+-]+", line
        )
        assert line.startswith("violations=0")
