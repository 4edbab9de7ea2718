import shutil
from fractions import Fraction as F

import pytest

from modestab import data
from modestab.exactnum import Gaussian


def test_bundle_shapes(bundle):
    assert set(bundle.quasilog) == {"a1", "a2", "b1", "b2"}
    assert sorted(bundle.quasilog["a1"]) == list(range(1, 51))
    assert all(len(row) == 6 for row in bundle.quasilog["b2"].values())
    assert len(bundle.anchor_roots) == 17
    assert bundle.J[0] == 1 and bundle.M[0] == 1


def test_first_quasilog_entry(bundle):
    assert bundle.quasilog["a1"][1][0] == Gaussian(F(49, 12), F(43, 15))


def test_checksum_mismatch_is_reported(tmp_path):
    d = tmp_path / "data"
    shutil.copytree(data.default_data_dir(), d)
    target = next(p for p in sorted(d.iterdir()) if p.name.startswith("quasilog"))
    target.write_text(target.read_text() + "\n# tampered\n")
    with pytest.raises(data.IngestError, match="checksum"):
        data.ingest(d)


def test_malformed_entry_names_file_and_line(tmp_path):
    d = tmp_path / "data"
    shutil.copytree(data.default_data_dir(), d)
    target = next(p for p in sorted(d.iterdir()) if p.name.startswith("quasilog"))
    lines = target.read_text().splitlines()
    idx = next(i for i, ln in enumerate(lines) if ln.strip() and not ln.startswith("#"))
    lines[idx] = lines[idx].rsplit(None, 1)[0] + " 1/x"
    target.write_text("\n".join(lines) + "\n")
    with pytest.raises(data.IngestError, match=rf"{target.name}:{idx + 1}"):
        data.ingest(d, verify=False)


def test_missing_directory():
    with pytest.raises(data.IngestError):
        data.ingest("/nonexistent/modestab-data")


def test_with_quasilog_copies(bundle):
    changed = bundle.with_quasilog("a1", 3, 2, Gaussian(0))
    assert changed.quasilog["a1"][3][2] == 0
    assert bundle.quasilog["a1"][3][2] != 0
