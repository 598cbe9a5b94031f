"""Independent reference implementations used only by the tests.

These deliberately avoid the code paths they check: the twisted-strand
composition is a literal graph chase on two stacked permutation
diagrams, and the orthogonal diagram action is the edge-by-edge delta
product rather than a permute-contract-permute factorization.
"""
from fractions import Fraction

import numpy as np

from diagramalg.diagrams import BrauerDiagram, Wall
from diagramalg.linalg import zeros_matrix


def bizarre_compose(p1: BrauerDiagram, p2: BrauerDiagram, wall: Wall):
    """Compose two permutation diagrams by gluing the bottom-left of the
    first to the top-left of the second and the top-right of the first to
    the bottom-right of the second.  Returns (composite, loops).

    Under the flip bijection this matches ordinary walled composition.
    """
    m, r = wall.m, wall.r
    assert p1.m == m and p2.m == m
    assert p1.is_permutation() and p2.is_permutation()

    def mate(tag, v):
        diagram = p1 if tag == 1 else p2
        return (tag, diagram.partner[v])

    def identified(tag, v):
        # interior gluing: (1, bottom j) ~ (2, top j) for j < r,
        #                  (1, top j)    ~ (2, bottom j) for j >= r
        if tag == 1 and v >= m and v - m < r:
            return (2, v - m)
        if tag == 2 and v < m and v < r:
            return (1, v + m)
        if tag == 1 and v < m and v >= r:
            return (2, v + m)
        if tag == 2 and v >= m and v - m >= r:
            return (1, v - m)
        return None

    def boundary_index(tag, v):
        # composite top: (1, top j) j < r and (2, top j) j >= r
        # composite bottom: (2, bottom j) j < r and (1, bottom j) j >= r
        if tag == 1 and v < r:
            return v
        if tag == 2 and r <= v < m:
            return v
        if tag == 2 and m <= v < m + r:
            return v
        if tag == 1 and v >= m + r:
            return v
        return None

    partner = [-1] * (2 * m)
    seen = set()
    for tag0, v0 in [(1, j) for j in range(r)] + [(2, j) for j in range(r, m)] \
            + [(2, m + j) for j in range(r)] + [(1, m + j) for j in range(r, m)]:
        start = boundary_index(tag0, v0)
        if partner[start] != -1:
            continue
        tag, v = mate(tag0, v0)
        seen.add((tag0, v0))
        while boundary_index(tag, v) is None:
            seen.add((tag, v))
            tag, v = identified(tag, v)
            seen.add((tag, v))
            tag, v = mate(tag, v)
        seen.add((tag, v))
        end = boundary_index(tag, v)
        partner[start] = end
        partner[end] = start

    loops = 0
    for tag0 in (1, 2):
        for v0 in range(2 * m):
            if boundary_index(tag0, v0) is not None or (tag0, v0) in seen:
                continue
            loops += 1
            tag, v = tag0, v0
            while (tag, v) not in seen:
                seen.add((tag, v))
                tag, v = mate(tag, v)
                seen.add((tag, v))
                tag, v = identified(tag, v)
    return BrauerDiagram(m, tuple(partner)), loops


def orthogonal_diagram_matrix(d: BrauerDiagram, n: int) -> np.ndarray:
    """Edge-product formula for the orthogonal flavour: with the identity
    Gram matrix every edge contributes a plain Kronecker delta, so no
    orientation choices arise."""
    m = d.m
    dim = n ** m
    out = zeros_matrix(dim, dim)

    def digits(flat):
        out_digits = [0] * m
        for k in range(m - 1, -1, -1):
            flat, out_digits[k] = divmod(flat, n)
        return out_digits

    vertical, top_h, bot_h = [], [], []
    for v, w in d.edges:
        if w < m:
            top_h.append((v, w))
        elif v >= m:
            bot_h.append((v - m, w - m))
        else:
            vertical.append((v, w - m))

    for src in range(dim):
        idig = digits(src)
        if any(idig[a] != idig[b] for a, b in bot_h):
            continue
        for dst in range(dim):
            jdig = digits(dst)
            if any(jdig[a] != idig[b] for a, b in vertical):
                continue
            if any(jdig[a] != jdig[b] for a, b in top_h):
                continue
            out[dst, src] = 1
    return out
