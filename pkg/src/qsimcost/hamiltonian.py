"""Second-quantized Hamiltonian ingestion and term enumeration.

This module turns electronic-structure integral tables into the ordered list
of spin-orbital interaction terms that the rest of the package costs out:
each term is one unit of Trotterization, one rotation per product-formula
half-step.

Conventions
-----------
* Integral files use the FCIDUMP layout: a namelist header, then lines of
  ``value p q r s`` with 1-based orbital indices. Zero indices mark the
  sections: four nonzero indices are two-electron integrals, ``r = s = 0``
  marks one-electron integrals, all-zero marks the core (nuclear repulsion)
  energy. Two-electron values are chemist-notation integrals (pq|rs) over
  spatial orbitals and obey the 8-fold real-orbital symmetry.
* Spatial orbital p (1-based) owns two spin orbitals: 2p-1 (spin up) and
  2p (spin down). Spin-orbital indices are 1-based everywhere in the public
  API.
* A merged term keeps one representative of each Hermitian-conjugate pair,
  stored as (creation pair ascending, annihilation pair ascending) with the
  creation pair not after the annihilation pair; its operator norm is the
  absolute coefficient because the paired fermionic monomial has unit norm.

Term classes follow the standard index-pattern taxonomy:

========  =====================================  ==========================
class     operator                               canonical index tuple
========  =====================================  ==========================
``PP``    h n_p                                  (p,)
``PQ``    h (a+_p a_q + a+_q a_p), p < q         (p, q)
``PQQP``  w n_p n_q, p < q                       (p, q, p, q)
``PQQR``  w (a+_c1 a+_c2 a_a2 a_a1 + h.c.)       (c1, c2, a1, a2), 3 distinct
``PQRS``  w (a+_c1 a+_c2 a_a2 a_a1 + h.c.)       (c1, c2, a1, a2), 4 distinct
========  =====================================  ==========================
"""

from __future__ import annotations

import dataclasses
import math
import re
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "IntegralTable",
    "HamiltonianTerm",
    "TermList",
    "CliffordCostTable",
    "CliffordStepCount",
    "parse_fcidump",
    "write_fcidump",
    "enumerate_terms",
    "clifford_count_per_step",
    "export_terms",
    "parse_terms",
]

TERM_CLASSES = ("PP", "PQ", "PQQP", "PQQR", "PQRS")

_EIGHTFOLD = (
    (0, 1, 2, 3), (1, 0, 2, 3), (0, 1, 3, 2), (1, 0, 3, 2),
    (2, 3, 0, 1), (3, 2, 0, 1), (2, 3, 1, 0), (3, 2, 1, 0),
)


class IntegralTable:
    """Spatial-orbital integrals in chemist notation.

    Attributes:
        n_spatial: number of spatial orbitals.
        n_electrons: electron count from the source file.
        one_body: (n, n) array, h[p-1, q-1] in Hartree, symmetric.
        two_body: (n, n, n, n) array, (pq|rs) in Hartree with the 8-fold
            real-orbital symmetry.
        core_energy: constant shift in Hartree (nuclear repulsion plus any
            frozen-core contribution).
        source_label: human-readable origin of the data.
    """

    def __init__(self, n_spatial, n_electrons=0, core_energy=0.0, source_label=""):
        if n_spatial < 1:
            raise ValueError(f"n_spatial must be positive, got {n_spatial}")
        self.n_spatial = int(n_spatial)
        self.n_electrons = int(n_electrons)
        self.core_energy = float(core_energy)
        self.source_label = source_label
        self.one_body = np.zeros((n_spatial, n_spatial))
        self.two_body = np.zeros((n_spatial,) * 4)

    def set_one_body(self, p, q, value):
        """Store h_pq = h_qp. Indices are 1-based."""
        self.one_body[p - 1, q - 1] = value
        self.one_body[q - 1, p - 1] = value

    def set_two_body(self, p, q, r, s, value):
        """Store (pq|rs) and its 8-fold symmetry images. Indices are 1-based."""
        idx = (p - 1, q - 1, r - 1, s - 1)
        for perm in _EIGHTFOLD:
            self.two_body[idx[perm[0]], idx[perm[1]], idx[perm[2]], idx[perm[3]]] = value

    def check_symmetry(self, tol=0.0):
        """Raise if the stored arrays violate the real-integral symmetries."""
        if not np.all(np.abs(self.one_body - self.one_body.T) <= tol):
            raise ValueError("one-body integrals are not symmetric")
        v = self.two_body
        for perm in _EIGHTFOLD[1:]:
            if not np.all(np.abs(v - np.transpose(v, perm)) <= tol):
                raise ValueError("two-body integrals violate the 8-fold symmetry")

    def __eq__(self, other):
        if not isinstance(other, IntegralTable):
            return NotImplemented
        return (
            self.n_spatial == other.n_spatial
            and self.n_electrons == other.n_electrons
            and self.core_energy == other.core_energy
            and np.array_equal(self.one_body, other.one_body)
            and np.array_equal(self.two_body, other.two_body)
        )

    def __repr__(self):
        return (
            f"IntegralTable(n_spatial={self.n_spatial}, n_electrons={self.n_electrons}, "
            f"core_energy={self.core_energy!r}, source={self.source_label!r})"
        )


def _spatial(so):
    """Spatial orbital (1-based) owning spin orbital so (1-based)."""
    return (so + 1) // 2


def _spin(so):
    """0 for spin up (odd index), 1 for spin down (even index)."""
    return (so + 1) % 2


@dataclasses.dataclass(frozen=True)
class HamiltonianTerm:
    """One classified, Hermitian-merged second-quantized term.

    Attributes:
        term_class: one of PP, PQ, PQQP, PQQR, PQRS.
        spin_orbitals: canonical 1-based index tuple; length 1 or 2 for
            one-body terms, 4 for two-body terms (creation pair ascending
            then annihilation pair ascending).
        coefficient: real prefactor of the merged operator, in Hartree.
        norm: operator-norm contribution used by the error bound, equal to
            abs(coefficient) times a per-class multiplier (default 1).
    """

    term_class: str
    spin_orbitals: tuple
    coefficient: float
    norm: float

    def __post_init__(self):
        if self.term_class not in TERM_CLASSES:
            raise ValueError(f"unknown term class {self.term_class!r}")
        expected_len = {"PP": 1, "PQ": 2, "PQQP": 4, "PQQR": 4, "PQRS": 4}[self.term_class]
        expected_distinct = {"PP": 1, "PQ": 2, "PQQP": 2, "PQQR": 3, "PQRS": 4}[self.term_class]
        if len(self.spin_orbitals) != expected_len or (
            len(set(self.spin_orbitals)) != expected_distinct
        ):
            raise ValueError(
                f"{self.term_class} term needs {expected_len} indices with "
                f"{expected_distinct} distinct, got {self.spin_orbitals}"
            )

    @property
    def support(self):
        """Distinct spin orbitals the term acts on (no string interiors)."""
        return frozenset(self.spin_orbitals)

    @property
    def is_diagonal(self):
        """Diagonal terms commute with every occupation-number operator."""
        return self.term_class in ("PP", "PQQP")

    @property
    def is_one_body(self):
        return len(self.spin_orbitals) <= 2

    @property
    def creation(self):
        """Creation index pair (ascending) of the representative monomial."""
        if self.term_class == "PP":
            return (self.spin_orbitals[0],)
        if self.term_class == "PQ":
            return (self.spin_orbitals[0],)
        return self.spin_orbitals[:2]

    @property
    def annihilation(self):
        """Annihilation index pair (ascending) of the representative monomial."""
        if self.term_class == "PP":
            return (self.spin_orbitals[0],)
        if self.term_class == "PQ":
            return (self.spin_orbitals[1],)
        return self.spin_orbitals[2:]

    @property
    def hop_endpoints(self):
        """The two non-repeated indices of a hopping-type term.

        Defined for PQ (the pair itself) and PQQR (the symmetric difference
        of the creation and annihilation pairs); None for other classes.
        """
        if self.term_class == "PQ":
            return frozenset(self.spin_orbitals)
        if self.term_class == "PQQR":
            return frozenset(self.creation) ^ frozenset(self.annihilation)
        return None

    @property
    def number_indices(self):
        """Indices appearing in both halves (occupation-number factors)."""
        if self.term_class == "PP":
            return frozenset(self.spin_orbitals)
        if self.term_class in ("PQQP", "PQQR"):
            return frozenset(self.creation) & frozenset(self.annihilation)
        return frozenset()

    @property
    def jw_chain(self):
        """Qubits of the term's Jordan-Wigner string, parity chain included.

        Diagonal terms have no chain beyond their own support. Hopping terms
        span the closed index range between the endpoints. Four-index terms
        span two segments, one per creation/annihilation pairing, walking
        the four indices in ascending order.
        """
        cls = self.term_class
        if cls == "PP":
            return (self.spin_orbitals[0],)
        if cls == "PQQP":
            return tuple(sorted(self.support))
        if cls == "PQ":
            p, q = self.spin_orbitals
            return tuple(range(p, q + 1))
        if cls == "PQQR":
            lo, hi = sorted(self.hop_endpoints)
            (shared,) = self.number_indices
            chain = set(range(lo, hi + 1))
            chain.add(shared)
            return tuple(sorted(chain))
        w1, w2, w3, w4 = sorted(self.support)
        return tuple(range(w1, w2 + 1)) + tuple(range(w3, w4 + 1))

    @property
    def ladder(self):
        """CNOT ladder as consecutive qubit pairs along the string chain."""
        chain = self.jw_chain
        return tuple(zip(chain[:-1], chain[1:]))

    def sort_key(self):
        return self.spin_orbitals


@dataclasses.dataclass(frozen=True)
class TermList:
    """Lexicographically ordered, Hermitian-merged term list.

    Attributes:
        terms: tuple of HamiltonianTerm in canonical-tuple order.
        n_spin_orbitals: width of the spin-orbital register.
        n_electrons: electron count carried through from the integrals.
        core_energy: constant shift, excluded from the terms.
        ordering: label of the ordering rule in force.
    """

    terms: tuple
    n_spin_orbitals: int
    n_electrons: int = 0
    core_energy: float = 0.0
    ordering: str = "lexicographic"

    def __post_init__(self):
        keys = [t.sort_key() for t in self.terms]
        if keys != sorted(keys):
            raise ValueError("terms are not in lexicographic canonical order")
        for t in self.terms:
            if max(t.spin_orbitals, default=1) > self.n_spin_orbitals:
                raise ValueError(
                    f"term {t.spin_orbitals} exceeds register of "
                    f"{self.n_spin_orbitals} spin orbitals"
                )

    @property
    def m(self):
        """Number of merged terms (one per Hermitian-conjugate pair)."""
        return len(self.terms)

    @property
    def m_unmerged(self):
        """Term count with both members of each conjugate pair counted.

        Self-adjoint terms (PP, PQQP) count once; every off-diagonal merged
        term stands for two conjugate monomials.
        """
        return sum(1 if t.is_diagonal else 2 for t in self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __getitem__(self, i):
        return self.terms[i]

    def by_class(self):
        """Map from class name to the list positions holding that class."""
        out = {c: [] for c in TERM_CLASSES}
        for i, t in enumerate(self.terms):
            out[t.term_class].append(i)
        return out


# ---------------------------------------------------------------------------
# FCIDUMP reading and writing
# ---------------------------------------------------------------------------

_HEADER_INT = {
    "NORB": re.compile(r"NORB\s*=\s*(-?\d+)", re.IGNORECASE),
    "NELEC": re.compile(r"NELEC\s*=\s*(-?\d+)", re.IGNORECASE),
}


def parse_fcidump(source, source_label=None):
    """Read an FCIDUMP file into an IntegralTable.

    Args:
        source: path to the file, or any object with a read() method.
        source_label: label stored on the table; defaults to the path.

    Returns:
        IntegralTable with symmetry-completed integrals.

    Raises:
        ValueError: malformed header, orbital index out of range, or a
            non-numeric value field, each reported with its line number.
    """
    if hasattr(source, "read"):
        text = source.read()
        label = source_label or getattr(source, "name", "<stream>")
    else:
        with open(source) as fh:
            text = fh.read()
        label = source_label or str(source)

    lines = text.splitlines()
    header_end = None
    for i, line in enumerate(lines):
        if "&END" in line.upper() or line.strip() == "/":
            header_end = i
            break
    if header_end is None:
        raise ValueError("line 1: malformed header, no &END or / terminator")
    header = " ".join(lines[: header_end + 1])
    if "&FCI" not in header.upper():
        raise ValueError("line 1: malformed header, missing &FCI namelist")

    fields = {}
    for key, pattern in _HEADER_INT.items():
        match = pattern.search(header)
        if match is None:
            raise ValueError(f"line 1: malformed header, missing {key}")
        fields[key] = int(match.group(1))
    norb = fields["NORB"]
    if norb < 1:
        raise ValueError(f"line 1: malformed header, NORB = {norb}")

    table = IntegralTable(norb, n_electrons=fields["NELEC"], source_label=label)

    for lineno, line in enumerate(lines[header_end + 1 :], start=header_end + 2):
        parts = line.split()
        if not parts:
            continue
        if len(parts) < 5:
            raise ValueError(f"line {lineno}: expected 'value p q r s', got {line!r}")
        try:
            value = float(parts[0])
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric value {parts[0]!r}") from None
        try:
            p, q, r, s = (int(x) for x in parts[1:5])
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer orbital index in {line!r}") from None
        for name, idx in (("p", p), ("q", q), ("r", r), ("s", s)):
            if idx < 0 or idx > norb:
                raise ValueError(
                    f"line {lineno}: index {name}={idx} out of range 1..{norb}"
                )
        if p == q == r == s == 0:
            table.core_energy = value
        elif r == 0 and s == 0:
            if p == 0 or q == 0:
                # single nonzero index: orbital-energy record, not stored
                continue
            table.set_one_body(p, q, value)
        elif p and q and r and s:
            table.set_two_body(p, q, r, s, value)
        else:
            raise ValueError(
                f"line {lineno}: index pattern ({p},{q},{r},{s}) is neither "
                "two-body, one-body, nor core"
            )
    return table


def write_fcidump(table, destination):
    """Write an IntegralTable in FCIDUMP layout.

    One canonical representative per 8-fold symmetry class is emitted, floats
    carry 17 significant digits so re-parsing reproduces an identical table.

    Args:
        table: IntegralTable to serialize.
        destination: path or writable file object.
    """
    n = table.n_spatial
    lines = [
        f" &FCI NORB={n:3d},NELEC={table.n_electrons:3d},MS2=0,",
        "  ORBSYM=" + "1," * n,
        "  ISYM=1,",
        " &END",
    ]

    def emit(value, p, q, r, s):
        lines.append(f"  {value: .16E} {p:4d} {q:4d} {r:4d} {s:4d}")

    for p in range(1, n + 1):
        for q in range(1, p + 1):
            pq = p * (p + 1) // 2 + q
            for r in range(1, n + 1):
                for s in range(1, r + 1):
                    if r * (r + 1) // 2 + s > pq:
                        continue
                    value = table.two_body[p - 1, q - 1, r - 1, s - 1]
                    if value != 0.0:
                        emit(value, p, q, r, s)
    for p in range(1, n + 1):
        for q in range(1, p + 1):
            value = table.one_body[p - 1, q - 1]
            if value != 0.0:
                emit(value, p, q, 0, 0)
    emit(table.core_energy, 0, 0, 0, 0)

    text = "\n".join(lines) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# Spin-orbital term enumeration
# ---------------------------------------------------------------------------

def _classify(creation, annihilation):
    distinct = len(set(creation) | set(annihilation))
    if distinct == 2:
        return "PQQP"
    if distinct == 3:
        return "PQQR"
    return "PQRS"


def enumerate_terms(table, drop_threshold=1e-10, norm_multipliers=None):
    """Expand spatial integrals into ordered spin-orbital terms.

    The two-body part is brought to the normal-ordered pair form

        H2 = sum_{i<k, j<l} w[(i,k),(j,l)] a+_i a+_k a_l a_j,
        w = (ij|kl)_so - (il|kj)_so,

    where (ij|kl)_so is the chemist integral of the owning spatial orbitals
    when the spins of i,j and of k,l match, else zero. Hermitian-conjugate
    pairs are merged by keeping the orientation whose creation pair does not
    exceed its annihilation pair; coinciding pairs give the self-adjoint
    PQQP terms. Spin conservation holds by construction: a term survives
    only if the spin multiset of its creation pair equals that of its
    annihilation pair.

    Args:
        table: IntegralTable with chemist-notation integrals.
        drop_threshold: terms with abs(coefficient) <= this are removed.
        norm_multipliers: optional map class name -> norm multiplier applied
            on top of abs(coefficient); defaults to 1.0 for every class.

    Returns:
        TermList in lexicographic canonical order.
    """
    multipliers = {c: 1.0 for c in TERM_CLASSES}
    if norm_multipliers:
        unknown = set(norm_multipliers) - set(TERM_CLASSES)
        if unknown:
            raise ValueError(f"unknown term classes in norm_multipliers: {sorted(unknown)}")
        multipliers.update(norm_multipliers)

    n_sp = table.n_spatial
    n_so = 2 * n_sp
    h1 = table.one_body
    v2 = table.two_body
    terms = []

    def add(term_class, spin_orbitals, coefficient):
        if abs(coefficient) <= drop_threshold:
            return
        terms.append(
            HamiltonianTerm(
                term_class=term_class,
                spin_orbitals=tuple(spin_orbitals),
                coefficient=float(coefficient),
                norm=abs(float(coefficient)) * multipliers[term_class],
            )
        )

    # one-body terms: h_pq is spin diagonal, so both indices share a spin
    for p in range(1, n_sp + 1):
        for q in range(p, n_sp + 1):
            value = h1[p - 1, q - 1]
            if value == 0.0:
                continue
            for spin_offset in (1, 2):  # 2p-1 up, 2p down
                i = 2 * p - 2 + spin_offset
                j = 2 * q - 2 + spin_offset
                if i == j:
                    add("PP", (i,), value)
                else:
                    add("PQ", (i, j), value)

    # two-body terms over creation pairs (i < k) and annihilation pairs
    # (j < l); the chemist integral pairs i with j and k with l
    def v_so(i, j, k, l):
        if _spin(i) != _spin(j) or _spin(k) != _spin(l):
            return 0.0
        return v2[_spatial(i) - 1, _spatial(j) - 1, _spatial(k) - 1, _spatial(l) - 1]

    pairs = [(i, k) for i in range(1, n_so + 1) for k in range(i + 1, n_so + 1)]
    spin_sig = {pair: (_spin(pair[0]) + _spin(pair[1])) for pair in pairs}
    for ci, (i, k) in enumerate(pairs):
        for j, l in pairs[ci:]:
            # creation (i, k) paired with annihilation (j, l); the mirrored
            # orientation is the Hermitian conjugate and is not revisited
            if spin_sig[(i, k)] != spin_sig[(j, l)]:
                continue
            w = v_so(i, j, k, l) - v_so(i, l, k, j)
            if w == 0.0:
                continue
            add(_classify((i, k), (j, l)), (i, k, j, l), w)

    terms.sort(key=HamiltonianTerm.sort_key)
    return TermList(
        terms=tuple(terms),
        n_spin_orbitals=n_so,
        n_electrons=table.n_electrons,
        core_energy=table.core_energy,
    )


# ---------------------------------------------------------------------------
# Per-step Clifford cost model
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class CliffordCostTable:
    """Configurable circuit-cost constants for one exponentiated term.

    A weight-w string costs entangling_per_rung * (w - 1) entangling gates
    and, unless the term is diagonal in the computational basis,
    basis_changes_per_qubit * w basis-change gates, plus one rotation.
    Consecutive terms whose CNOT ladders share a prefix cancel
    2 * prefix_length entangling gates at the junction.
    """

    entangling_per_rung: int = 2
    basis_changes_per_qubit: int = 2
    diagonal_basis_changes: int = 0
    cancel_adjacent_ladders: bool = True


@dataclasses.dataclass(frozen=True)
class CliffordStepCount:
    """Gate tally for one second-order product-formula step."""

    entangling: int
    basis_changes: int
    rotations: int

    @property
    def total_clifford(self):
        return self.entangling + self.basis_changes


def _ladder_common_prefix(a, b):
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def clifford_count_per_step(terms, cost_table=None):
    """Clifford gates of one second-order step under the documented model.

    The step applies every term once in order and once in reverse order, so
    a term list of M terms contributes exactly 2M rotations. Entangling and
    basis-change counts follow the per-term string model of
    CliffordCostTable, with ladder cancellation between consecutive terms
    of the forward-plus-reverse sequence (the turnaround repeats the last
    term, so its ladder cancels completely).

    Args:
        terms: TermList (or any iterable of HamiltonianTerm in step order).
        cost_table: CliffordCostTable overriding the default constants.

    Returns:
        CliffordStepCount for a single step.
    """
    table = cost_table or CliffordCostTable()
    sequence = list(terms)
    if not sequence:
        return CliffordStepCount(entangling=0, basis_changes=0, rotations=0)
    sequence = sequence + sequence[::-1]

    entangling = 0
    basis = 0
    for term in sequence:
        w = len(term.jw_chain)
        entangling += table.entangling_per_rung * (w - 1)
        if term.is_diagonal:
            basis += table.diagonal_basis_changes * w
        else:
            basis += table.basis_changes_per_qubit * w
    if table.cancel_adjacent_ladders:
        for prev, cur in zip(sequence[:-1], sequence[1:]):
            entangling -= 2 * _ladder_common_prefix(prev.ladder, cur.ladder)
    return CliffordStepCount(
        entangling=entangling,
        basis_changes=basis,
        rotations=2 * len(terms),
    )


# ---------------------------------------------------------------------------
# Term list serialization
# ---------------------------------------------------------------------------

def export_terms(terms):
    """Render a term list as text, one 'class indices coefficient' per line."""
    lines = []
    for t in terms:
        idx = " ".join(str(i) for i in t.spin_orbitals)
        lines.append(f"{t.term_class} {idx} {t.coefficient: .16E}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_terms(text, n_spin_orbitals, n_electrons=0, core_energy=0.0):
    """Inverse of export_terms; validates classes and canonical order."""
    terms = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        cls = parts[0]
        if cls not in TERM_CLASSES:
            raise ValueError(f"line {lineno}: unknown term class {cls!r}")
        try:
            indices = tuple(int(x) for x in parts[1:-1])
            coefficient = float(parts[-1])
        except ValueError:
            raise ValueError(f"line {lineno}: malformed term line {line!r}") from None
        terms.append(
            HamiltonianTerm(
                term_class=cls,
                spin_orbitals=indices,
                coefficient=coefficient,
                norm=abs(coefficient),
            )
        )
    return TermList(
        terms=tuple(terms),
        n_spin_orbitals=n_spin_orbitals,
        n_electrons=n_electrons,
        core_energy=core_energy,
    )
