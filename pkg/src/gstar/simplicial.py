"""Finite truncated simplicial sets: nerves of finite categories and an
exhaustive checker for the simplicial identities."""

from __future__ import annotations

from typing import Protocol

import numpy as np

from .category import FinCategory
from .report import Report


class TruncatedSimplicialSet(Protocol):
    d: int

    def size(self, k: int) -> int: ...

    def face(self, k: int, i: int) -> np.ndarray: ...

    def degeneracy(self, k: int, i: int) -> np.ndarray: ...


class Nerve:
    """Nerve of a finite category through degree ``d``.

    A k-simplex (k >= 1) is a string ``(m_1, ..., m_k)`` of composable
    morphism ids, ``m_i: c_{i-1} -> c_i``.  A 0-simplex at ``c`` is stored as
    ``(id_c,)``.  Degenerate simplices are explicit identity entries.
    """

    def __init__(self, cat: FinCategory, d: int):
        self.cat = cat
        self.d = d
        zero = [(cat.identity(a),) for a in cat.objects]
        self.simplices: list[list[tuple[int, ...]]] = [zero]
        if d >= 1:
            self.simplices.append([(m,) for m in cat.morphisms()])
        out_of: dict = {a: [] for a in cat.objects}
        for m in cat.morphisms():
            out_of[cat.dom(m)].append(m)
        for _ in range(2, d + 1):
            prev = self.simplices[-1]
            self.simplices.append([s + (m,) for s in prev for m in out_of[cat.cod(s[-1])]])
        self.index = [{s: i for i, s in enumerate(level)} for level in self.simplices]
        self._faces: dict[tuple[int, int], np.ndarray] = {}
        self._degens: dict[tuple[int, int], np.ndarray] = {}

    def size(self, k: int) -> int:
        return len(self.simplices[k])

    def vertex(self, s: tuple[int, ...], k: int, i: int):
        if k == 0:
            return self.cat.dom(s[0])
        return self.cat.dom(s[i]) if i < k else self.cat.cod(s[k - 1])

    def face_of(self, s: tuple[int, ...], k: int, i: int) -> tuple[int, ...]:
        cat = self.cat
        if k == 1:
            return (cat.identity(cat.cod(s[0]) if i == 0 else cat.dom(s[0])),)
        if i == 0:
            return s[1:]
        if i == k:
            return s[:-1]
        return s[: i - 1] + (cat.compose(s[i], s[i - 1]),) + s[i + 1:]

    def degeneracy_of(self, s: tuple[int, ...], k: int, i: int) -> tuple[int, ...]:
        if k == 0:
            return s
        ident = self.cat.identity(self.vertex(s, k, i))
        return s[:i] + (ident,) + s[i:]

    def face(self, k: int, i: int) -> np.ndarray:
        key = (k, i)
        if key not in self._faces:
            idx = self.index[k - 1]
            self._faces[key] = np.array([idx[self.face_of(s, k, i)] for s in self.simplices[k]],
                                        dtype=np.int64)
        return self._faces[key]

    def degeneracy(self, k: int, i: int) -> np.ndarray:
        key = (k, i)
        if key not in self._degens:
            idx = self.index[k + 1]
            self._degens[key] = np.array([idx[self.degeneracy_of(s, k, i)] for s in self.simplices[k]],
                                         dtype=np.int64)
        return self._degens[key]


def check_simplicial_identities(S: TruncatedSimplicialSet, name: str = "simplicial") -> Report:
    """Every simplicial identity whose source and target degrees are at most ``S.d``."""
    report = Report(name)
    d = S.d
    fault = None
    for k in range(2, d + 1):
        for j in range(1, k + 1):
            for i in range(j):
                lhs = S.face(k - 1, i)[S.face(k, j)]
                rhs = S.face(k - 1, j - 1)[S.face(k, i)]
                if not np.array_equal(lhs, rhs):
                    fault = fault or {"identity": f"d{i} d{j} = d{j - 1} d{i}", "degree": k}
    report.add("face-face", fault is None, witness=fault)

    fault = None
    for k in range(0, d):
        ident = np.arange(S.size(k))
        for j in range(k + 1):
            s = S.degeneracy(k, j)
            for i in range(k + 2):
                lhs = S.face(k + 1, i)[s]
                if i < j:
                    rhs = S.degeneracy(k - 1, j - 1)[S.face(k, i)]
                elif i in (j, j + 1):
                    rhs = ident
                else:
                    rhs = S.degeneracy(k - 1, j)[S.face(k, i - 1)]
                if not np.array_equal(lhs, rhs):
                    fault = fault or {"identity": f"d{i} s{j}", "degree": k}
    report.add("face-degeneracy", fault is None, witness=fault)

    fault = None
    for k in range(0, d - 1):
        for j in range(k + 1):
            for i in range(j + 1):
                lhs = S.degeneracy(k + 1, i)[S.degeneracy(k, j)]
                rhs = S.degeneracy(k + 1, j + 1)[S.degeneracy(k, i)]
                if not np.array_equal(lhs, rhs):
                    fault = fault or {"identity": f"s{i} s{j} = s{j + 1} s{i}", "degree": k}
    report.add("degeneracy-degeneracy", fault is None, witness=fault)
    return report


class TableSimplicialSet:
    """A truncated simplicial set given by explicit face/degeneracy tables."""

    def __init__(self, sizes: list[int], faces: dict, degeneracies: dict):
        self.sizes = list(sizes)
        self.d = len(sizes) - 1
        self.faces = {k: np.asarray(v, dtype=np.int64) for k, v in faces.items()}
        self.degeneracies = {k: np.asarray(v, dtype=np.int64) for k, v in degeneracies.items()}

    def size(self, k: int) -> int:
        return self.sizes[k]

    def face(self, k: int, i: int) -> np.ndarray:
        return self.faces[(k, i)]

    def degeneracy(self, k: int, i: int) -> np.ndarray:
        return self.degeneracies[(k, i)]


def monotone_to_interval(k: int) -> list[tuple[int, ...]]:
    """k-simplices of Delta[1]: monotone [k] -> [1], all-zero first."""
    return [tuple([0] * z + [1] * (k + 1 - z)) for z in range(k + 1, -1, -1)]
