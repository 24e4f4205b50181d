"""Regenerate ``tests/data/oracle_values.json`` from the mpmath oracle.

Run from the repository root:  python tests/make_oracle_data.py

The file is committed; tests only read it.  Each corpus entry stores the
double-precision input matrix (the rounded high-precision matrix) next
to the oracle results, so the frozen values do not depend on the
generator staying unchanged.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE))

import oracles as o  # noqa: E402

from coreep import gen  # noqa: E402

OUT = HERE / "data" / "oracle_values.json"
CORPUS_SIZE = 60
CORPUS_SEED = 8128

EXAMPLES = {
    "A": [[1, 2, 3], [0, 0, 0], [0, 0, 0]],
    "B": [[1, 2, 3], [0, 0, 1], [0, 0, 0]],
    "shift2": [[0, 1], [0, 0]],
    "diag20": [[2, 0], [0, 0]],
    "I3": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    "zero2": [[0, 0], [0, 0]],
}


def enc(m: np.ndarray):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def oracle_record(e):
    k = o.index(e)
    ak = o.power(e, k)
    rec = {
        "index": k,
        "rank": o.rank(e, o.fro(e)),
        "core_rank": o.rank(ak, o.fro(e) ** k),
        "mp": enc(o.to_np(o.moore_penrose(e))),
        "drazin": enc(o.to_np(o.drazin(e))),
        "core_ep": enc(o.to_np(o.core_ep(e))),
        "a1": enc(o.to_np(o.core_ep_a1(e))),
    }
    if k <= 1:
        rec["core"] = enc(o.to_np(o.core_inverse_index1(e)))
    return rec


def main():
    data = {"dps": o.DPS, "examples": {}, "corpus": []}
    with o.precision():
        for name, rows in EXAMPLES.items():
            e = o.to_mp(np.array(rows, dtype=complex))
            data["examples"][name] = {"a": enc(np.array(rows, dtype=complex)), **oracle_record(e)}
        specs = gen.corpus(CORPUS_SIZE, n_max=8, index_max=4, conditioning=1e3, seed=CORPUS_SEED)
        for spec in specs:
            _, cf = gen.matrix_with_structure(spec)
            e = o.exact_from_blocks(cf.u, cf.t, cf.s, cf.nil)
            rec = oracle_record(e)
            assert rec["index"] == spec.nilpotency_index and rec["core_rank"] == spec.core_rank, spec
            data["corpus"].append({"a": enc(o.to_np(e)), **rec})
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(data, indent=1) + "\n")
    print(f"wrote {OUT} ({len(data['corpus'])} corpus entries)")


if __name__ == "__main__":
    main()
