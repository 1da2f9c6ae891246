"""State file I/O and built-in named states.

The on-disk format is a JSON document

    {"dims": [d1, d2, ...], "re": [[...]], "im": [[...]]}

with row-major real and imaginary parts written at full precision, so a
save/load round trip reproduces the state exactly.
"""

from __future__ import annotations

import json
import math
import os
import tempfile

import numpy as np

from .errors import DimensionMismatchError, StateFileError
from .qmat import DensityMatrix, validate_density

NAMED_STATES = ("bell", "ghz", "classical-corr", "maxmix:d")


def bell() -> DensityMatrix:
    """The maximally entangled two-qubit state (|00> + |11>)/sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1.0 / math.sqrt(2.0)
    return validate_density(np.outer(v, v.conj()), (2, 2))


def ghz() -> DensityMatrix:
    """(|000> + |111>)/sqrt(2) on three qubits."""
    v = np.zeros(8, dtype=complex)
    v[0] = v[7] = 1.0 / math.sqrt(2.0)
    return validate_density(np.outer(v, v.conj()), (2, 2, 2))


def maxmix(d: int) -> DensityMatrix:
    return validate_density(np.eye(d, dtype=complex) / d, (d,))


def classical_corr() -> DensityMatrix:
    """(|00><00| + |11><11|)/2: classically correlated, zero entanglement."""
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[3, 3] = 0.5
    return validate_density(m, (2, 2))


def builtin_state(name: str) -> DensityMatrix | None:
    """Resolve a named state, or None if the name is not recognized."""
    if name == "bell":
        return bell()
    if name == "ghz":
        return ghz()
    if name == "classical-corr":
        return classical_corr()
    if name.startswith("maxmix:"):
        try:
            d = int(name.split(":", 1)[1])
        except ValueError:
            raise StateFileError(f"bad maxmix dimension in {name!r}")
        if d < 1:
            raise StateFileError(f"bad maxmix dimension in {name!r}")
        return maxmix(d)
    return None


def state_to_dict(rho: DensityMatrix) -> dict:
    return {
        "dims": [int(d) for d in rho.dims],
        "re": rho.mat.real.tolist(),
        "im": rho.mat.imag.tolist(),
    }


def state_from_dict(doc: dict) -> DensityMatrix:
    for key in ("dims", "re", "im"):
        if key not in doc:
            raise StateFileError(f"state document missing key {key!r}")
    dims = doc["dims"]
    if not isinstance(dims, list) or not dims:
        raise StateFileError("'dims' must be a nonempty list of integers")
    try:
        re = np.asarray(doc["re"], dtype=float)
        im = np.asarray(doc["im"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"'re'/'im' are not rectangular numeric arrays: {exc}")
    if re.ndim != 2 or re.shape != im.shape or re.shape[0] != re.shape[1]:
        raise StateFileError(
            f"'re'/'im' must be equal square matrices, got {re.shape} and {im.shape}"
        )
    if math.prod(int(d) for d in dims) != re.shape[0]:
        raise StateFileError(
            f"dims {dims} have product {math.prod(int(d) for d in dims)} but "
            f"matrix is {re.shape[0]}x{re.shape[0]}"
        )
    return validate_density(re + 1j * im, dims)


def load_state(path: str) -> DensityMatrix:
    """Read and validate a state file (raises StateFileError on schema
    problems, validation errors on a bad state)."""
    try:
        with open(path) as f:
            doc = json.load(f)
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path} is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise StateFileError(f"{path}: top level must be a JSON object")
    return state_from_dict(doc)


def write_json_atomic(doc, path: str) -> None:
    """Serialize to JSON, writing via temp-file-then-rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            json.dump(doc, f, indent=2)
            f.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_state(rho: DensityMatrix, path: str) -> None:
    write_json_atomic(state_to_dict(rho), path)


def resolve_state(arg: str, dims=None) -> DensityMatrix:
    """Accept a named state or a file path; optionally re-declare dims."""
    rho = builtin_state(arg)
    if rho is None:
        rho = load_state(arg)
    if dims is not None:
        from .qmat import with_dims

        if math.prod(int(d) for d in dims) != rho.total_dim:
            raise DimensionMismatchError(
                f"--dims {list(dims)} incompatible with total dimension "
                f"{rho.total_dim}"
            )
        rho = with_dims(rho, dims)
    return rho
