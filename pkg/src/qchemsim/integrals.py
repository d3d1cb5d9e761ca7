"""Text format for one- and two-electron integrals.

::

    M 4
    const 0.7137          # optional scalar offset
    1e 1 1 -1.25          # h_pq, 1-based
    2e 1 2 2 1 0.67       # h_pqrs, multiplies a+_p a+_q a_r a_s (with the 1/2 prefactor)

Unlisted entries are zero. A listed entry whose Hermitian partner
(``q p`` for one-electron, ``s r q p`` for two-electron) is absent gets the
same value; listing both with different values is an error.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, ParseError
from .fermion import SecondQuantizedHamiltonian


def parse_integrals(text: str, tol: float = 1e-12) -> SecondQuantizedHamiltonian:
    m = None
    const = 0.0
    one: dict[tuple[int, ...], tuple[float, int]] = {}
    two: dict[tuple[int, ...], tuple[float, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        try:
            if kind == "M":
                if m is not None or len(tok) != 2:
                    raise ParseError("expected a single 'M <count>' header", lineno)
                m = int(tok[1])
                if m < 1:
                    raise ParseError("mode count must be positive", lineno)
            elif kind == "const":
                if len(tok) != 2:
                    raise ParseError("expected 'const <value>'", lineno)
                const += float(tok[1])
            elif kind in ("1e", "2e"):
                if m is None:
                    raise ParseError("integral before 'M' header", lineno)
                n_idx = 2 if kind == "1e" else 4
                if len(tok) != n_idx + 2:
                    raise ParseError(f"'{kind}' needs {n_idx} indices and a value", lineno)
                idx = tuple(int(t) for t in tok[1:1 + n_idx])
                value = float(tok[-1])
                if any(not 1 <= i <= m for i in idx):
                    raise DomainError(f"line {lineno}: index outside 1..{m}")
                table = one if kind == "1e" else two
                key = tuple(i - 1 for i in idx)
                if key in table and table[key][0] != value:
                    raise DomainError(f"line {lineno}: conflicting values for {kind} {idx}")
                table[key] = (value, lineno)
            else:
                raise ParseError(f"unknown record {kind!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, (ParseError, DomainError)):
                raise
            raise ParseError(str(exc), lineno) from None
    if m is None:
        raise ParseError("missing 'M <count>' header")

    h1 = np.zeros((m, m))
    h2 = np.zeros((m,) * 4)
    for table, arr, partner in ((one, h1, lambda k: k[::-1]), (two, h2, lambda k: k[::-1])):
        for key, (value, lineno) in table.items():
            pk = partner(key)
            if pk in table and abs(table[pk][0] - value) > tol:
                raise DomainError(
                    f"line {lineno}: entry {tuple(i + 1 for i in key)} = {value} differs from its "
                    f"Hermitian partner {tuple(i + 1 for i in pk)} = {table[pk][0]}"
                )
            arr[key] = value
            arr[pk] = value
    ham = SecondQuantizedHamiltonian(h1, h2, const)
    ham.check_hermitian(tol)
    return ham


def write_integrals(ham: SecondQuantizedHamiltonian) -> str:
    """Serialise every non-zero entry (partners included) with 17 significant digits."""
    lines = [f"M {ham.n_modes}"]
    if ham.constant:
        lines.append(f"const {ham.constant:.17g}")
    for p, q in zip(*np.nonzero(ham.h1)):
        lines.append(f"1e {p + 1} {q + 1} {ham.h1[p, q]:.17g}")
    for p, q, r, s in zip(*np.nonzero(ham.h2)):
        lines.append(f"2e {p + 1} {q + 1} {r + 1} {s + 1} {ham.h2[p, q, r, s]:.17g}")
    return "\n".join(lines) + "\n"


def random_integrals(n_modes: int, rng=None, scale2: float = 0.25) -> SecondQuantizedHamiltonian:
    """Random integrals with the symmetries of real orbitals.

    ``h2`` is symmetrised over ``pqrs -> srqp, qpsr, rspq`` so it is Hermitian
    and invariant under exchanging the two electrons.
    """
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    a = gen.normal(size=(n_modes, n_modes))
    h1 = (a + a.T) / 2 - np.diag(np.arange(n_modes, 0, -1))
    b = gen.normal(size=(n_modes,) * 4) * scale2
    h2 = (b + b.transpose(3, 2, 1, 0) + b.transpose(1, 0, 3, 2) + b.transpose(2, 3, 0, 1)) / 4
    # make the Hermitian partners bitwise equal, not just equal to rounding
    h2 = (h2 + h2.transpose(3, 2, 1, 0)) / 2
    return SecondQuantizedHamiltonian(h1, h2)
