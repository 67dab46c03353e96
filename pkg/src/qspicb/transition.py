"""Labeled matrices of Laurent polynomials.

Transition matrices between a standard basis and a constructed basis
are the common currency of this package: canonical-basis solvers
produce them, oracles compare them entrywise, and the CLI serializes
them.  Columns index the constructed basis, rows the standard one, so
column c lists the coefficients of basis vector c.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import TriangularityError
from .laurent import LaurentPoly


@dataclass
class TransitionMatrix:
    row_labels: tuple
    col_labels: tuple
    entries: dict = field(default_factory=dict)   # (row_idx, col_idx) -> poly
    order_note: str = ""
    lattice: str = "A"

    def __post_init__(self):
        self._row_index = {lab: i for i, lab in enumerate(self.row_labels)}
        self._col_index = {lab: j for j, lab in enumerate(self.col_labels)}

    @classmethod
    def from_columns(cls, row_labels, col_labels, columns, **kw):
        """columns: dict col_label -> {row_label: LaurentPoly}."""
        tm = cls(tuple(row_labels), tuple(col_labels), {}, **kw)
        for clab, col in columns.items():
            j = tm._col_index[clab]
            for rlab, poly in col.items():
                if not poly.is_zero():
                    tm.entries[(tm._row_index[rlab], j)] = poly
        return tm

    def entry(self, row_label, col_label):
        key = (self._row_index[row_label], self._col_index[col_label])
        return self.entries.get(key, LaurentPoly.zero())

    def column(self, col_label):
        j = self._col_index[col_label]
        return {self.row_labels[i]: p
                for (i, jj), p in self.entries.items() if jj == j}

    def check_unitriangular(self, less=None):
        """Diagonal must be 1 and every off-diagonal entry must sit
        strictly below its column in the given partial order (row
        label strictly less than column label).  ``less(a, b)`` may be
        omitted when row and column labels share one linear order, in
        which case positions are compared."""
        if len(self.row_labels) != len(self.col_labels):
            raise TriangularityError("matrix is not square")
        for j, lab in enumerate(self.col_labels):
            i = self._row_index.get(lab)
            if i is None:
                raise TriangularityError(
                    "column label %r missing from rows" % (lab,))
            d = self.entries.get((i, j))
            if d != LaurentPoly.one():
                raise TriangularityError(
                    "diagonal entry at %r is %s, not 1" % (lab, d))
        for (i, j), p in self.entries.items():
            rlab, clab = self.row_labels[i], self.col_labels[j]
            if rlab == clab or p.is_zero():
                continue
            ok = less(rlab, clab) if less else (
                self._col_index.get(rlab, i) < j if rlab in self._col_index
                else i < j)
            if not ok:
                raise TriangularityError(
                    "entry at row %r, column %r violates triangularity"
                    % (rlab, clab))

    def check_offdiag_lattice(self, lattice):
        for (i, j), p in self.entries.items():
            if self.row_labels[i] == self.col_labels[j]:
                continue
            if not p.in_lattice(lattice):
                raise TriangularityError(
                    "entry at row %r, column %r not in %s: %s"
                    % (self.row_labels[i], self.col_labels[j], lattice, p))

    def matmul(self, other):
        """self @ other, matching self's columns to other's rows."""
        if self.col_labels != other.row_labels:
            raise ValueError("label mismatch in matrix product")
        by_col = {}
        for (i, k), p in self.entries.items():
            by_col.setdefault(k, []).append((i, p))
        out = {}
        for (k, j), p2 in other.entries.items():
            for i, p1 in by_col.get(k, []):
                key = (i, j)
                cur = out.get(key)
                out[key] = p1 * p2 if cur is None else cur + p1 * p2
        out = {k: v for k, v in out.items() if not v.is_zero()}
        return TransitionMatrix(self.row_labels, other.col_labels, out,
                                order_note=self.order_note,
                                lattice=self.lattice)

    def inverse_unitriangular(self):
        """Inverse, assuming square unitriangular with identical row
        and column labels; stays within Laurent polynomials."""
        labels = self.col_labels
        n = len(labels)
        if tuple(self.row_labels) != tuple(labels):
            raise TriangularityError("row and column labels differ")
        cols = {}
        for (i, j), p in self.entries.items():
            cols.setdefault(j, {})[i] = p
        one = LaurentPoly.one()
        inv_cols = {}
        for j in range(n):
            # solve (self) x = e_j by back-substitution: repeatedly clear
            # the maximal residual coordinate using that column, which
            # only touches strictly lower coordinates
            out = {}
            residual = {j: one}
            while residual:
                k = max(residual)
                c = residual.pop(k)
                if c.is_zero():
                    continue
                out[k] = out.get(k, LaurentPoly.zero()) + c
                for i, p in cols.get(k, {}).items():
                    if i == k:
                        continue
                    residual[i] = residual.get(i, LaurentPoly.zero()) - c * p
            inv_cols[j] = {i: p for i, p in out.items() if not p.is_zero()}
        entries = {(i, j): p for j, col in inv_cols.items()
                   for i, p in col.items()}
        return TransitionMatrix(self.row_labels, self.col_labels, entries,
                                order_note=self.order_note,
                                lattice=self.lattice)

    def to_json_dict(self, label_fmt=str):
        cols = {}
        for (i, j), p in sorted(self.entries.items()):
            cols.setdefault(label_fmt(self.col_labels[j]), {})[
                label_fmt(self.row_labels[i])] = p.to_json()
        return {
            "row_labels": [label_fmt(l) for l in self.row_labels],
            "col_labels": [label_fmt(l) for l in self.col_labels],
            "columns": cols,
            "order_note": self.order_note,
            "lattice": self.lattice,
        }

    def to_csv_text(self, label_fmt=str):
        lines = ["row,col,entry"]
        for (i, j), p in sorted(self.entries.items()):
            lines.append("%s,%s,%s" % (label_fmt(self.row_labels[i]),
                                       label_fmt(self.col_labels[j]), p))
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, TransitionMatrix):
            return NotImplemented
        if (self.row_labels, self.col_labels) != (other.row_labels,
                                                  other.col_labels):
            return False
        keys = set(self.entries) | set(other.entries)
        zero = LaurentPoly.zero()
        return all(self.entries.get(k, zero) == other.entries.get(k, zero)
                   for k in keys)
