"""Deliberately naive reference implementations used to cross-check the package.

Nothing here imports the rewriting engine; only the Cayley table is shared.
"""

from __future__ import annotations

from collections import deque


def basic(t, e, f):
    return e in (t[e][f], t[f][e]) or f in (t[e][f], t[f][e])


def one_step(t, w, max_len):
    """Every word one relation away from ``w`` (both directions)."""
    n = len(t)
    out = set()
    for i in range(len(w) - 1):
        e, f = w[i], w[i + 1]
        if basic(t, e, f):
            out.add(w[:i] + (t[e][f],) + w[i + 2:])
    if len(w) < max_len:
        for i, g in enumerate(w):
            for e in range(n):
                for f in range(n):
                    if t[e][f] == g and basic(t, e, f):
                        out.add(w[:i] + (e, f) + w[i + 1:])
    return out


def naive_class(t, w, max_len, cap=200_000):
    """The words of length <= max_len connected to ``w``; None if over ``cap``."""
    seen = {w}
    todo = deque([w])
    while todo:
        x = todo.popleft()
        for y in one_step(t, x, max_len):
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    return None
                todo.append(y)
    return seen


def irreducibles(t, w):
    """All irreducible words reachable from ``w`` by contractions."""
    out, todo, seen = set(), [w], {w}
    while todo:
        x = todo.pop()
        moved = False
        for i in range(len(x) - 1):
            if basic(t, x[i], x[i + 1]):
                moved = True
                y = x[:i] + (t[x[i]][x[i + 1]],) + x[i + 2:]
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        if not moved:
            out.add(x)
    return out


def product(t, w):
    acc = w[0]
    for x in w[1:]:
        acc = t[acc][x]
    return acc
