"""Fingerprint/activity dataset parsing, validation and quantile services.

File format: CSV with header ``id,activity,fp`` where ``fp`` is a
32-character hex string encoding 128 bits most-significant-first.
``#``-prefixed lines are comments; ``# name: X`` and ``# target: Y``
set dataset metadata. Molecules are stored sorted by (activity, id), so
an index into a dataset is also an activity rank.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DatasetSizeError, ParseError, ValidationError

FP_BITS = 128
FP_HEX_CHARS = FP_BITS // 4
MIN_DATASET_SIZE = 10


def fp_from_hex(text: str) -> np.ndarray:
    """Decode a 32-char hex string into a (128,) uint8 bit vector, MSB first."""
    if len(text) != FP_HEX_CHARS:
        raise ValueError(
            f"fingerprint must be {FP_HEX_CHARS} hex characters, got {len(text)}"
        )
    try:
        raw = bytes.fromhex(text)
    except ValueError:
        raise ValueError(f"fingerprint is not valid hex: {text!r}") from None
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))


def fp_to_hex(bits: np.ndarray) -> str:
    """Inverse of :func:`fp_from_hex`; emits lowercase hex."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.shape != (FP_BITS,):
        raise ValueError(f"fingerprint must have shape ({FP_BITS},)")
    return np.packbits(bits).tobytes().hex()


def floor_scaled(n: int, fraction: float) -> int:
    """⌊n * fraction⌋, nudged so decimal fractions behave exactly.

    Plain floor(10 * 0.7) is 6 because 0.7 is not a binary float; the
    1e-9 nudge restores the intended integer for any human-scale input.
    """
    return int(math.floor(n * fraction + 1e-9))


@dataclass(frozen=True, eq=False)
class Molecule:
    """Single record view: identifier, 128-bit fingerprint, pIC50 activity."""

    id: str
    fingerprint: np.ndarray
    activity: float


@dataclass(frozen=True)
class IngestOptions:
    """Parsing behaviour toggles.

    dedup_average: average the activities of rows sharing an id (the
    convention for compounds with multiple measurements) instead of
    rejecting them as duplicates.
    """

    dedup_average: bool = False


class Dataset:
    """Immutable activity-sorted collection of molecules.

    Rows are sorted by (activity ascending, id ascending); the sort is
    total, so index i is the i-th lowest activity and ties are resolved
    deterministically.
    """

    def __init__(self, name, target_id, ids, activities, bits):
        ids = [str(i) for i in ids]
        activities = np.asarray(activities, dtype=np.float64)
        bits = np.asarray(bits, dtype=np.uint8)
        n = len(ids)
        if activities.shape != (n,) or bits.shape != (n, FP_BITS):
            raise ValidationError(
                f"inconsistent shapes: {n} ids, {activities.shape} activities, "
                f"{bits.shape} fingerprints"
            )
        if n < MIN_DATASET_SIZE:
            raise DatasetSizeError(
                f"dataset {name!r} has {n} molecules; need at least {MIN_DATASET_SIZE}"
            )
        if not np.all(np.isfinite(activities)):
            raise ValidationError(f"dataset {name!r} has non-finite activities")
        if bits.max(initial=0) > 1:
            raise ValidationError("fingerprint bits must be 0 or 1")
        for mol_id in ids:
            if not mol_id:
                raise ValidationError("molecule ids must be non-empty")
        if len(set(ids)) != n:
            seen, dup = set(), None
            for mol_id in ids:
                if mol_id in seen:
                    dup = mol_id
                    break
                seen.add(mol_id)
            raise ValidationError(f"duplicate molecule id {dup!r}")

        order = np.lexsort((np.asarray(ids, dtype=object), activities))
        self.name = str(name)
        self.target_id = str(target_id)
        self.ids = tuple(ids[i] for i in order)
        self.activities = activities[order]
        self.bits = np.ascontiguousarray(bits[order])
        self.activities.setflags(write=False)
        self.bits.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.ids)

    def molecule(self, i: int) -> Molecule:
        return Molecule(self.ids[i], self.bits[i], float(self.activities[i]))

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other):
        return (
            isinstance(other, Dataset)
            and self.name == other.name
            and self.target_id == other.target_id
            and self.ids == other.ids
            and np.array_equal(self.activities, other.activities)
            and np.array_equal(self.bits, other.bits)
        )

    def __repr__(self):
        return f"Dataset({self.name!r}, target={self.target_id!r}, n={self.n})"


def parse_dataset(path, options: IngestOptions = IngestOptions()) -> Dataset:
    """Read a dataset CSV, validate it, and return an activity-sorted Dataset."""
    name = None
    target_id = ""
    header_seen = False
    rows = {}  # id -> list of (activity, bits, line_no)
    order = []  # first-seen id order, for stable error reporting

    with open(path, "r", encoding="utf-8", newline=None) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                for key in ("name", "target"):
                    if body.lower().startswith(key + ":"):
                        value = body[len(key) + 1 :].strip()
                        if key == "name":
                            name = value
                        else:
                            target_id = value
                continue
            if not header_seen:
                if [c.strip() for c in line.split(",")] != ["id", "activity", "fp"]:
                    raise ParseError(path, line_no, "expected header 'id,activity,fp'")
                header_seen = True
                continue
            fields = line.split(",")
            if len(fields) != 3:
                raise ParseError(path, line_no, f"expected 3 fields, got {len(fields)}")
            mol_id, act_text, fp_text = (f.strip() for f in fields)
            if not mol_id:
                raise ParseError(path, line_no, "empty molecule id")
            try:
                activity = float(act_text)
            except ValueError:
                raise ParseError(
                    path, line_no, f"unparseable activity {act_text!r}"
                ) from None
            if not math.isfinite(activity):
                raise ParseError(path, line_no, f"non-finite activity {act_text!r}")
            try:
                bits = fp_from_hex(fp_text.lower())
            except ValueError as exc:
                raise ParseError(path, line_no, str(exc)) from None
            if mol_id not in rows:
                rows[mol_id] = []
                order.append(mol_id)
            rows[mol_id].append((activity, bits, line_no))

    if not header_seen:
        raise ParseError(path, 1, "missing header 'id,activity,fp'")

    ids, activities, bit_rows = [], [], []
    for mol_id in order:
        entries = rows[mol_id]
        if len(entries) > 1:
            if not options.dedup_average:
                raise ValidationError(
                    f"{path}: duplicate molecule id {mol_id!r} "
                    f"(lines {', '.join(str(e[2]) for e in entries)})"
                )
            first_bits = entries[0][1]
            for _, bits, line_no in entries[1:]:
                if not np.array_equal(bits, first_bits):
                    raise ValidationError(
                        f"{path}: duplicate id {mol_id!r} with differing "
                        f"fingerprints (line {line_no})"
                    )
            activity = float(np.mean([e[0] for e in entries]))
            ids.append(mol_id)
            activities.append(activity)
            bit_rows.append(first_bits)
        else:
            ids.append(mol_id)
            activities.append(entries[0][0])
            bit_rows.append(entries[0][1])

    if name is None:
        import os

        name = os.path.splitext(os.path.basename(str(path)))[0]
    if not ids:
        raise DatasetSizeError(f"dataset {name!r} has 0 molecules")
    return Dataset(name, target_id, ids, np.array(activities), np.array(bit_rows))


def write_dataset(dataset: Dataset, path) -> None:
    """Serialize a Dataset in the canonical CSV form; round-trips exactly."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# name: {dataset.name}\n")
        if dataset.target_id:
            fh.write(f"# target: {dataset.target_id}\n")
        fh.write("id,activity,fp\n")
        for i in range(dataset.n):
            fh.write(
                f"{dataset.ids[i]},{float(dataset.activities[i])!r},"
                f"{fp_to_hex(dataset.bits[i])}\n"
            )


def empirical_quantile(dataset: Dataset, fraction: float) -> float:
    """Activity of the molecule at sorted index ⌊N * fraction⌋.

    Monotone nondecreasing in fraction; the index is clamped to [0, N-1].
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be in (0, 1), got {fraction}")
    idx = min(max(floor_scaled(dataset.n, fraction), 0), dataset.n - 1)
    return float(dataset.activities[idx])


def dataset_stats(dataset: Dataset) -> dict:
    """Summary used by the validate-data command."""
    density = dataset.bits.mean(axis=0)
    return {
        "name": dataset.name,
        "target_id": dataset.target_id,
        "n": dataset.n,
        "activity_min": float(dataset.activities[0]),
        "activity_median": float(np.median(dataset.activities)),
        "activity_max": float(dataset.activities[-1]),
        "bit_density_mean": float(density.mean()),
        "bit_density_min": float(density.min()),
        "bit_density_max": float(density.max()),
        "constant_columns": int(np.sum((density == 0.0) | (density == 1.0))),
    }
