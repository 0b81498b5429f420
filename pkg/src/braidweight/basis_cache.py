"""Disk cache for relation bases.

One text file per (n, parity, k), at ``rel_n{n}_{parity}_k{k}.basis``:
a format-version tag, the monomial ordering id, matrix dimensions, then
the reduced-echelon rows in row-major order with each entry written as a
decimal "numerator/denominator" string, and a final sha256 checksum of
everything above it.  Writes go through a temporary file and an atomic
rename, so concurrent builders of the same key settle on one artifact
(and since the reduced echelon form of a row space is unique, the
content is identical regardless of who wins).

Files that fail the version, ordering or checksum test are ignored and
rebuilt, never partially trusted.
"""

import hashlib
import os
import tempfile
from fractions import Fraction

FORMAT_VERSION = "1"


def cache_path(cache_dir, n, parity, k):
    return os.path.join(cache_dir, f"rel_n{n}_{parity}_k{k}.basis")


def resolve_cache_dir(explicit=None):
    """Explicit path, else $BRAIDWEIGHT_CACHE, else ./cache."""
    if explicit:
        return explicit
    return os.environ.get("BRAIDWEIGHT_CACHE") or "cache"


def store_basis(cache_dir, basis):
    from .algebra import MONOMIAL_ORDER_ID

    os.makedirs(cache_dir, exist_ok=True)
    cols = len(basis.monomials)
    lines = [
        f"braidweight-relbasis {FORMAT_VERSION}",
        f"order {MONOMIAL_ORDER_ID}",
        f"n {basis.n}",
        f"parity {basis.parity}",
        f"k {basis.k}",
        f"rows {len(basis.rows)}",
        f"cols {cols}",
    ]
    for pivot in sorted(basis.rows):
        row = basis.rows[pivot]
        lines.append(" ".join(
            f"{row.get(c, Fraction(0)).numerator}/{row.get(c, Fraction(0)).denominator}"
            for c in range(cols)))
    payload = "\n".join(lines) + "\n"
    digest = hashlib.sha256(payload.encode()).hexdigest()
    payload += f"checksum sha256 {digest}\n"
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(payload)
        os.replace(tmp, cache_path(cache_dir, basis.n, basis.parity, basis.k))
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def load_basis(cache_dir, n, parity, k):
    """Return the cached RelationBasis, or None if absent or invalid."""
    from .algebra import MONOMIAL_ORDER_ID, RelationBasis, enumerate_monomials

    path = cache_path(cache_dir, n, parity, k)
    if not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            text = fh.read()
        # the checksum line covers everything before it
        idx = text.index("checksum sha256")
        payload, checksum_line = text[:idx], text[idx:].strip()
        digest = checksum_line.rsplit(" ", 1)[1]
        if hashlib.sha256(payload.encode()).hexdigest() != digest:
            return None
        lines = payload.splitlines()
        if lines[0] != f"braidweight-relbasis {FORMAT_VERSION}":
            return None
        if lines[1] != f"order {MONOMIAL_ORDER_ID}":
            return None
        header = dict(line.split(" ", 1) for line in lines[2:7])
        if (int(header["n"]), header["parity"], int(header["k"])) != (n, parity, k):
            return None
        nrows, cols = int(header["rows"]), int(header["cols"])
        monomials = enumerate_monomials(n, k)
        if cols != len(monomials):
            return None
        rows = {}
        for line in lines[7 : 7 + nrows]:
            entries = line.split()
            row = {}
            pivot = None
            for c, tok in enumerate(entries):
                num, den = tok.split("/")
                v = Fraction(int(num), int(den))
                if v:
                    if pivot is None:
                        pivot = c
                    row[c] = v
            rows[pivot] = row
        quotient = tuple(c for c in range(cols) if c not in rows)
        return RelationBasis(n, parity, k, tuple(monomials), rows, quotient)
    except (ValueError, KeyError, IndexError, OSError):
        return None


def list_cache(cache_dir):
    """Names of basis files currently in the cache directory."""
    if not os.path.isdir(cache_dir):
        return []
    return sorted(f for f in os.listdir(cache_dir) if f.endswith(".basis"))


def clear_cache(cache_dir):
    """Remove all basis files; returns the number removed."""
    removed = 0
    for name in list_cache(cache_dir):
        os.unlink(os.path.join(cache_dir, name))
        removed += 1
    return removed
