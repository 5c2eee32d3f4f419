"""JSON codecs for the public data types.

Complex matrices are written row-major as a flat list of ``[re, im]`` pairs.
Nested ``d x d`` lists of pairs are accepted on input as well.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .born_rule import ConditionalMatrix, Povm
from .errors import DimensionError
from .sic_core import Fiducial, SicSet


def _pairs(values):
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex).ravel()]


def _complex(pairs):
    arr = np.asarray(pairs, dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def matrix_to_json(M):
    return _pairs(M)


def matrix_from_json(data, d):
    z = _complex(data)
    if z.size != d * d:
        raise DimensionError(f"expected {d * d} matrix entries, got {z.size}")
    return z.reshape(d, d)


def fiducial_to_dict(f):
    return {"d": f.d, "amplitudes": _pairs(f.amplitudes)}


def fiducial_from_dict(data):
    return Fiducial(int(data["d"]), _complex(data["amplitudes"]))


def sicset_to_dict(s):
    return {"d": s.d, "projectors": [_pairs(P) for P in s.projectors]}


def sicset_from_dict(data):
    d = int(data["d"])
    return SicSet(d, np.array([matrix_from_json(P, d) for P in data["projectors"]]), "loaded")


def probs_to_dict(p):
    p = np.asarray(p, dtype=float)
    return {"n": int(p.size), "p": [float(x) for x in p]}


def probs_from_dict(data):
    p = np.asarray(data["p"], dtype=float)
    if "n" in data and int(data["n"]) != p.size:
        raise DimensionError(f"declared n={data['n']} but {p.size} components given")
    return p


def density_to_dict(rho):
    rho = np.asarray(rho)
    return {"d": int(rho.shape[0]), "entries": _pairs(rho)}


def density_from_dict(data):
    d = int(data["d"])
    entries = data.get("entries", data.get("matrix"))
    if entries is None:
        raise KeyError("matrix needs an 'entries' field")
    return matrix_from_json(entries, d)


unitary_to_dict = density_to_dict
unitary_from_dict = density_from_dict


def povm_to_dict(povm):
    return {"d": povm.d, "effects": [_pairs(F) for F in povm.effects]}


def povm_from_dict(data):
    d = int(data["d"])
    return Povm(d, np.array([matrix_from_json(F, d) for F in data["effects"]]))


def conditional_to_dict(R):
    return {"m": R.m, "n": R.n, "r": R.r.tolist()}


def conditional_from_dict(data):
    R = ConditionalMatrix(np.asarray(data["r"], dtype=float))
    if (R.m, R.n) != (int(data["m"]), int(data["n"])):
        raise DimensionError(f"declared shape ({data['m']}, {data['n']}) but r is {R.r.shape}")
    return R


def load_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def dump_json(obj, path):
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")
