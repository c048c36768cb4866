"""Tests for config parsing, the sweep driver, reference caching, and CSV output."""

import math
from pathlib import Path

import numpy as np
import pytest

from wkbsplit.errors import CacheError, ConfigError, IoError
from wkbsplit.harness import (
    CSV_HEADER,
    ErrorRecord,
    SweepConfig,
    load_config,
    prepare_references,
    run_convergence_sweep,
    write_records,
)

EPS_DEFAULTS = (1.0, 2.0**-2, 2.0**-4, 2.0**-6, 2.0**-8, 2.0**-10)


def mini_config(cache_dir, **overrides):
    """A sweep whose references cost well under a second."""
    lines = {
        "scheme": "strang",
        "eps": "0.25",
        "nx": "32",
        "nt": "16, 32, 64",
        "nx_ref": "64",
        "nt_ref": "512",
        "nx_ref_wave": "128",
        "cache_dir": str(cache_dir),
    }
    lines.update(overrides)
    return load_config("".join(f"{k} = {v}\n" for k, v in lines.items()))


class TestLoadConfig:
    def test_empty_input_gives_documented_defaults(self):
        cfg = load_config(None)
        assert cfg.schemes == ("lie",)
        assert cfg.eps_values == EPS_DEFAULTS
        assert cfg.nx_values == (128,)
        assert cfg.nt_values == (32, 64, 128, 256, 512, 1024, 2048)
        assert cfg.t_final == 0.2
        assert cfg.initial_data == "paper41"
        assert (cfg.nx_ref, cfg.nt_ref, cfg.nx_ref_wave) == (256, 8192, 4096)
        assert cfg.refine_reference is False
        assert cfg.sobolev_index == 2.0

    def test_single_override_leaves_other_defaults(self):
        cfg = load_config("t_final = 1.0")
        assert cfg.t_final == 1.0
        assert cfg.eps_values == EPS_DEFAULTS

    def test_comments_and_blank_lines_skipped(self):
        cfg = load_config("# a comment\n\nt_final = 0.5  # trailing\n")
        assert cfg.t_final == 0.5

    def test_path_and_inline_sources_agree(self, tmp_path):
        text = "scheme = strang\nnt = 64\n"
        path = tmp_path / "sweep.cfg"
        path.write_text(text)
        assert load_config(path) == load_config(text)
        assert load_config(str(path)) == load_config(text)

    def test_unknown_key_reports_line_number(self):
        with pytest.raises(ConfigError, match="line 3"):
            load_config("t_final = 0.5\n# fine\nwavelength = 3\n")

    def test_malformed_value_reports_key_and_line(self):
        with pytest.raises(ConfigError, match="line 2.*nt"):
            load_config("scheme = lie\nnt = banana\n")

    def test_empty_list_rejected(self):
        with pytest.raises(ConfigError, match="line 1"):
            load_config("eps = \n")

    def test_missing_equals_rejected(self):
        with pytest.raises(ConfigError, match="line 2.*key = value"):
            load_config("t_final = 0.5\njust words\n")

    def test_duplicate_key_reports_both_lines(self):
        with pytest.raises(ConfigError, match="line 3.*duplicate.*line 1"):
            load_config("nt = 32\nt_final = 0.5\nnt = 64\n")

    def test_non_power_of_two_nx_rejected(self):
        with pytest.raises(ConfigError, match="powers of two"):
            load_config("nx = 100")

    def test_non_power_of_two_nt_rejected(self):
        with pytest.raises(ConfigError, match="powers of two"):
            load_config("nt = 100")

    def test_nonpositive_eps_rejected(self):
        with pytest.raises(ConfigError, match="eps"):
            load_config("eps = 0.25, 0")
        with pytest.raises(ConfigError, match="eps"):
            load_config("eps = -1")

    def test_nonpositive_t_final_rejected(self):
        with pytest.raises(ConfigError, match="t_final"):
            load_config("t_final = 0")

    def test_unknown_scheme_rejected(self):
        with pytest.raises(ConfigError, match="unknown scheme"):
            load_config("scheme = euler")

    def test_test_grid_must_not_exceed_reference(self):
        with pytest.raises(ConfigError, match="nx"):
            load_config("nx = 512\nnx_ref = 256\n")
        with pytest.raises(ConfigError, match="nt"):
            load_config("nt = 512\nnt_ref = 256\n")

    def test_paper41_forbids_expression_keys(self):
        with pytest.raises(ConfigError, match="s0"):
            load_config("s0 = sin(x)\n")

    def test_expression_mode_requires_all_three(self):
        with pytest.raises(ConfigError, match="v"):
            load_config("initial_data = expressions\ns0 = sin(x)\na0 = 1 + 0*x\n")

    def test_bad_expression_rejected_at_config_time(self):
        with pytest.raises(ConfigError, match="unknown name"):
            load_config(
                "initial_data = expressions\ns0 = sin(y)\na0 = 1 + 0*x\nv = 0*x\n"
            )

    def test_bool_values(self):
        assert load_config("refine_reference = true").refine_reference is True
        assert load_config("refine_reference = FALSE").refine_reference is False
        with pytest.raises(ConfigError, match="line 1"):
            load_config("refine_reference = maybe")

    def test_unreadable_path_is_config_error(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "missing.cfg")


class TestErrorRecordValidation:
    def good_kwargs(self):
        return dict(
            scheme="lie",
            eps=0.25,
            nx=32,
            nt=16,
            h=0.2 / 16,
            dx=2 * math.pi / 32,
            t_final=0.2,
            err_rho=1e-3,
            err_psi=1e-3,
            err_sa=1e-3,
            mass_drift_rel=1e-15,
            wallclock_seconds=0.01,
            status="ok",
            reference_id="tag",
        )

    def test_accepts_consistent_row(self):
        ErrorRecord(**self.good_kwargs())

    def test_rejects_unknown_status(self):
        kwargs = self.good_kwargs() | {"status": "exploded"}
        with pytest.raises(ConfigError, match="status"):
            ErrorRecord(**kwargs)

    def test_rejects_inconsistent_step_size(self):
        kwargs = self.good_kwargs() | {"h": 0.1}
        with pytest.raises(ConfigError, match="h"):
            ErrorRecord(**kwargs)

    def test_rejects_inconsistent_dx(self):
        kwargs = self.good_kwargs() | {"dx": 0.1}
        with pytest.raises(ConfigError, match="dx"):
            ErrorRecord(**kwargs)

    def test_ok_rows_need_finite_errors(self):
        kwargs = self.good_kwargs() | {"err_sa": float("nan")}
        with pytest.raises(ConfigError, match="finite"):
            ErrorRecord(**kwargs)

    def test_diverged_rows_may_carry_nan(self):
        kwargs = self.good_kwargs() | {
            "status": "diverged",
            "err_rho": float("nan"),
            "err_psi": float("nan"),
            "err_sa": float("nan"),
            "mass_drift_rel": float("nan"),
        }
        ErrorRecord(**kwargs)


class TestWriteRecords:
    def test_empty_records_give_header_only(self, tmp_path):
        path = tmp_path / "out.csv"
        write_records([], path)
        raw = path.read_bytes()
        assert raw == (CSV_HEADER + "\n").encode("utf-8")
        assert b"\r" not in raw

    def test_round_trip_single_record(self, tmp_path):
        record = ErrorRecord(
            scheme="strang",
            eps=2.0**-6,
            nx=64,
            nt=128,
            h=0.2 / 128,
            dx=2 * math.pi / 64,
            t_final=0.2,
            err_rho=1.2345678901234567e-5,
            err_psi=3.4e-7,
            err_sa=9.87e-6,
            mass_drift_rel=4.4e-16,
            wallclock_seconds=0.125,
            status="ok",
            reference_id="paper41-x",
        )
        path = tmp_path / "out.csv"
        write_records([record], path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 2
        assert lines[0] == CSV_HEADER
        fields = lines[1].split(",")
        assert fields[0] == "strang"
        assert float(fields[1]) == record.eps
        assert int(fields[2]) == 64 and int(fields[3]) == 128
        assert float(fields[4]) == record.h and float(fields[5]) == record.dx
        assert float(fields[7]) == record.err_rho
        assert float(fields[8]) == record.err_psi
        assert float(fields[9]) == record.err_sa
        assert float(fields[10]) == record.mass_drift_rel
        assert fields[12] == "ok" and fields[13] == "paper41-x"

    def test_io_failure_raises(self, tmp_path):
        with pytest.raises(IoError):
            write_records([], tmp_path)  # a directory is not writable as a file


class TestSweep:
    def test_row_count_and_sort_order(self, tmp_path):
        cfg = mini_config(tmp_path / "cache", scheme="lie, strang", nt="16, 32")
        records = run_convergence_sweep(cfg)
        assert len(records) == 2 * 1 * 1 * 2
        keys = [(r.scheme, r.eps, r.nx, r.nt) for r in records]
        assert keys == sorted(keys)

    def test_determinism_byte_identical_except_wallclock(self, tmp_path):
        cfg = mini_config(tmp_path / "cache")
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        write_records(run_convergence_sweep(cfg), out_a)
        write_records(run_convergence_sweep(cfg), out_b)

        def strip_wallclock(path):
            rows = path.read_text().splitlines()
            return [",".join(r.split(",")[:11] + r.split(",")[12:]) for r in rows]

        assert strip_wallclock(out_a) == strip_wallclock(out_b)

    def test_cache_delete_changes_nothing_beyond_1e14(self, tmp_path):
        cache = tmp_path / "cache"
        cfg = mini_config(cache)
        first = run_convergence_sweep(cfg)
        for entry in cache.iterdir():
            entry.unlink()
        second = run_convergence_sweep(cfg)
        for a, b in zip(first, second):
            assert abs(a.err_rho - b.err_rho) <= 1e-14
            assert abs(a.err_psi - b.err_psi) <= 1e-14
            assert abs(a.err_sa - b.err_sa) <= 1e-14

    def test_monotone_refinement_in_nt(self, tmp_path):
        cfg = mini_config(tmp_path / "cache", nt="16, 32, 64, 128")
        records = run_convergence_sweep(cfg)
        errs = [r.err_sa for r in records]
        for coarse, fine in zip(errs, errs[1:]):
            assert fine <= 1.05 * coarse

    def test_self_comparison_cell(self, tmp_path):
        cfg = mini_config(
            tmp_path / "cache", nx="64", nt="512", scheme="strang"
        )
        record = run_convergence_sweep(cfg)[0]
        assert record.err_sa <= 1e-12
        assert record.err_psi <= 1e-6  # different solver families meet here
        assert record.err_rho <= 1e-6

    def test_divergent_cell_marks_row_and_continues(self, tmp_path):
        cfg = mini_config(
            tmp_path / "cache",
            scheme="lie",
            nt="2, 64",
            t_final="2.0",
            initial_data="expressions",
            s0="2*cos(x)",
            a0="1 + 0*x",
            v="0*x",
        )
        records = run_convergence_sweep(cfg)
        by_nt = {r.nt: r for r in records}
        assert by_nt[2].status == "diverged"
        assert math.isnan(by_nt[2].err_sa)
        assert by_nt[64].status == "ok"
        assert math.isfinite(by_nt[64].err_sa)

    def test_diverged_rows_survive_csv_round_trip(self, tmp_path):
        cfg = mini_config(
            tmp_path / "cache",
            scheme="lie",
            nt="2",
            t_final="2.0",
            initial_data="expressions",
            s0="2*cos(x)",
            a0="1 + 0*x",
            v="0*x",
        )
        path = tmp_path / "out.csv"
        write_records(run_convergence_sweep(cfg), path)
        row = path.read_text().splitlines()[1].split(",")
        assert row[12] == "diverged"
        assert row[7] == "nan" and math.isnan(float(row[7]))

    def test_corrupted_cache_raises_cache_error(self, tmp_path):
        cache = tmp_path / "cache"
        cfg = mini_config(cache, nt="16")
        run_convergence_sweep(cfg)
        victim = sorted(cache.iterdir())[0]
        victim.write_text("0.0 not numbers at all\n")
        with pytest.raises(CacheError):
            run_convergence_sweep(cfg)

    def test_truncated_cache_raises_cache_error(self, tmp_path):
        cache = tmp_path / "cache"
        cfg = mini_config(cache, nt="16")
        run_convergence_sweep(cfg)
        victim = sorted(cache.iterdir())[0]
        lines = victim.read_text().splitlines()
        victim.write_text("\n".join(lines[: len(lines) // 2]) + "\n")
        with pytest.raises(CacheError):
            run_convergence_sweep(cfg)


class TestPrepareReferences:
    def test_reference_id_names_both_grids(self, tmp_path):
        cfg = mini_config(tmp_path / "cache")
        bundle = prepare_references(cfg, 0.25)
        assert "wkb64x512" in bundle.reference_id
        assert "wave128x512" in bundle.reference_id
        assert "paper41" in bundle.reference_id
        assert "," not in bundle.reference_id

    def test_second_call_reuses_cache_files(self, tmp_path):
        cache = tmp_path / "cache"
        cfg = mini_config(cache)
        prepare_references(cfg, 0.25)
        stamps = {p: p.stat().st_mtime_ns for p in cache.iterdir()}
        prepare_references(cfg, 0.25)
        assert {p: p.stat().st_mtime_ns for p in cache.iterdir()} == stamps

    def test_refinement_doubles_until_tolerance(self, tmp_path):
        cfg = mini_config(tmp_path / "cache", refine_reference="true")
        bundle = prepare_references(cfg, 0.25)
        # the refined reference reports the nt it settled on
        assert bundle.wkb.grid.n == 64
        assert "wkb64x" in bundle.reference_id

    def test_distinct_t_final_uses_distinct_cache_entries(self, tmp_path):
        cache = tmp_path / "cache"
        prepare_references(mini_config(cache), 0.25)
        count = len(list(cache.iterdir()))
        prepare_references(mini_config(cache, t_final="0.1"), 0.25)
        assert len(list(cache.iterdir())) == 2 * count


class TestSweepConfigDirect:
    def test_dataclass_rejects_bad_lists_directly(self):
        with pytest.raises(ConfigError):
            SweepConfig(schemes=())
        with pytest.raises(ConfigError):
            SweepConfig(eps_values=(0.5, -1.0))
        with pytest.raises(ConfigError):
            SweepConfig(nx_values=(48,))
        with pytest.raises(ConfigError):
            SweepConfig(nt_values=(12,))
