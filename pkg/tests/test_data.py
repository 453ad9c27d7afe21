import numpy as np
import pytest

from activesplit.data import (
    Dataset,
    IngestOptions,
    dataset_stats,
    empirical_quantile,
    floor_scaled,
    fp_from_hex,
    fp_to_hex,
    parse_dataset,
    write_dataset,
)
from activesplit.errors import DatasetSizeError, ParseError, ValidationError

HEX_A = "0123456789abcdef0123456789abcdef"
HEX_B = "f" * 32


def write_rows(path, rows, header="id,activity,fp", comments=()):
    lines = list(comments) + [header] + rows
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def make_rows(n):
    rng = np.random.default_rng(5)
    rows = []
    for i in range(n):
        bits = (rng.random(128) < 0.4).astype(np.uint8)
        rows.append(f"m{i},{rng.normal(6, 1):.4f},{fp_to_hex(bits)}")
    return rows


class TestFingerprintCodec:
    def test_roundtrip(self):
        bits = fp_from_hex(HEX_A)
        assert bits.shape == (128,)
        assert fp_to_hex(bits) == HEX_A

    def test_msb_first(self):
        bits = fp_from_hex("8" + "0" * 31)
        assert bits[0] == 1
        assert bits[1:].sum() == 0

    def test_bad_length(self):
        with pytest.raises(ValueError, match="32 hex"):
            fp_from_hex("ab")

    def test_bad_chars(self):
        with pytest.raises(ValueError, match="not valid hex"):
            fp_from_hex("g" * 32)


class TestParse:
    def test_a2a_row_count(self, corpus_dir):
        ds = parse_dataset(corpus_dir / "A2a.csv")
        assert ds.n == 203
        assert ds.name == "A2a"
        assert ds.target_id == "CHEMBL1867"

    def test_sorted_by_activity_then_id(self, tmp_path):
        p = tmp_path / "d.csv"
        rows = make_rows(12)
        # shuffle with two molecules sharing an activity
        rows[3] = f"zz,{5.0},{HEX_A}"
        rows[7] = f"aa,{5.0},{HEX_B}"
        write_rows(p, rows)
        ds = parse_dataset(p)
        acts = ds.activities
        assert np.all(acts[:-1] <= acts[1:])
        i, j = ds.ids.index("aa"), ds.ids.index("zz")
        assert i < j  # activity tie resolved by id

    def test_dedup_average(self, tmp_path):
        p = tmp_path / "d.csv"
        rows = make_rows(10)
        rows.append(f"dup,5.0,{HEX_A}")
        rows.append(f"dup,7.0,{HEX_A}")
        write_rows(p, rows)
        ds = parse_dataset(p, IngestOptions(dedup_average=True))
        assert ds.n == 11
        idx = ds.ids.index("dup")
        assert ds.activities[idx] == 6.0

    def test_duplicate_without_dedup_rejected(self, tmp_path):
        p = tmp_path / "d.csv"
        rows = make_rows(10) + [f"dup,5.0,{HEX_A}", f"dup,7.0,{HEX_A}"]
        write_rows(p, rows)
        with pytest.raises(ValidationError, match="dup"):
            parse_dataset(p)

    def test_duplicate_with_differing_fp_rejected(self, tmp_path):
        p = tmp_path / "d.csv"
        rows = make_rows(10) + [f"dup,5.0,{HEX_A}", f"dup,7.0,{HEX_B}"]
        write_rows(p, rows)
        with pytest.raises(ValidationError, match="differing"):
            parse_dataset(p, IngestOptions(dedup_average=True))

    def test_short_fingerprint_names_line(self, tmp_path):
        p = tmp_path / "d.csv"
        rows = make_rows(10)
        rows[4] = f"bad,5.0,{'a' * 31}"
        write_rows(p, rows)
        with pytest.raises(ParseError) as err:
            parse_dataset(p)
        assert err.value.line_no == 6  # header + 5 rows

    def test_unparseable_activity(self, tmp_path):
        p = tmp_path / "d.csv"
        rows = make_rows(10)
        rows[0] = f"bad,not-a-number,{HEX_A}"
        write_rows(p, rows)
        with pytest.raises(ParseError, match="activity"):
            parse_dataset(p)

    def test_nonfinite_activity(self, tmp_path):
        p = tmp_path / "d.csv"
        rows = make_rows(10)
        rows[0] = f"bad,nan,{HEX_A}"
        write_rows(p, rows)
        with pytest.raises(ParseError, match="non-finite"):
            parse_dataset(p)

    def test_too_small(self, tmp_path):
        p = tmp_path / "d.csv"
        write_rows(p, make_rows(9))
        with pytest.raises(DatasetSizeError):
            parse_dataset(p)

    def test_missing_header(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("\n".join(make_rows(10)) + "\n")
        with pytest.raises(ParseError, match="header"):
            parse_dataset(p)

    def test_comment_metadata_and_crlf(self, tmp_path):
        p = tmp_path / "d.csv"
        body = ["# name: Example", "# target: CHEMBL42", "id,activity,fp"]
        body += make_rows(10)
        p.write_bytes(("\r\n".join(body) + "\r\n").encode("utf-8"))
        ds = parse_dataset(p)
        assert ds.name == "Example"
        assert ds.target_id == "CHEMBL42"

    def test_roundtrip_identity(self, tmp_path, corpus_dir):
        ds = parse_dataset(corpus_dir / "A2a.csv")
        out = tmp_path / "copy.csv"
        write_dataset(ds, out)
        assert parse_dataset(out) == ds


class TestEmpiricalQuantile:
    def test_index_arithmetic(self):
        bits = np.zeros((10, 128), dtype=np.uint8)
        ds = Dataset("t", "", [f"m{i}" for i in range(10)],
                     np.arange(1.0, 11.0), bits)
        assert empirical_quantile(ds, 0.4) == 5.0

    def test_monotone_in_fraction(self, tiny_dataset):
        # brute-force oracle: sort activities, index at floor(n * f)
        acts = np.sort(tiny_dataset.activities)
        fractions = np.linspace(0.01, 0.99, 37)
        values = [empirical_quantile(tiny_dataset, f) for f in fractions]
        assert all(a <= b for a, b in zip(values[:-1], values[1:]))
        for f, v in zip(fractions, values):
            assert v == acts[min(floor_scaled(12, f), 11)]

    def test_degenerate_constant(self):
        bits = np.zeros((10, 128), dtype=np.uint8)
        ds = Dataset("t", "", [f"m{i}" for i in range(10)],
                     np.full(10, 3.25), bits)
        for f in (0.01, 0.4, 0.99):
            assert empirical_quantile(ds, f) == 3.25

    @pytest.mark.parametrize("fraction", [0.0, 1.0, -0.1, 1.5])
    def test_domain_errors(self, tiny_dataset, fraction):
        with pytest.raises(ValueError):
            empirical_quantile(tiny_dataset, fraction)


def test_floor_scaled_decimal_nudge():
    assert floor_scaled(10, 0.7) == 7
    assert floor_scaled(203, 0.4) == 81
    assert floor_scaled(100, 1.0 - 0.9) == 10


def test_stats(corpus_dir):
    stats = dataset_stats(parse_dataset(corpus_dir / "A2a.csv"))
    assert stats["n"] == 203
    assert stats["activity_min"] <= stats["activity_median"] <= stats["activity_max"]
    assert 0.0 < stats["bit_density_mean"] < 1.0
