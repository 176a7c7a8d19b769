"""Estimator-style wrapper around rule synthesis.

``fit`` takes a diagram and learns the local rule plus the initial
configuration; ``transform`` maps time indices to decoded label rows.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .diagram import Diagram, DiagramSpec, pad, validate
from .synth import DEFAULT_CONFIGS, Simulator, build_rule, decode_symbols, make_x_init
from .vershik import iterate, minimal_path


class AdicAutomaton(BaseEstimator):
    def __init__(self, rows=128, width=16, configs=DEFAULT_CONFIGS, depth=12):
        self.rows = rows
        self.width = width
        self.configs = configs
        self.depth = depth

    def fit(self, X, y=None):
        d = X if isinstance(X, Diagram) else validate(X) if isinstance(X, DiagramSpec) else None
        if d is None:
            raise TypeError("fit expects a DiagramSpec or Diagram")
        if self.depth < 1:
            raise ValueError("depth must be positive")
        self.diagram_ = d
        self.rule_ = build_rule(d, self.rows, self.width, tuple(self.configs))
        self.x_init_ = make_x_init(d, self.rule_.w)
        return self

    def _times(self, X):
        ns = np.asarray(X, dtype=int).ravel()
        if ns.size and ns.min() < 0:
            raise ValueError("time indices must be nonnegative")
        return ns

    def transform(self, X):
        """Decoded labels (rows) of the automaton at the requested times."""
        ns = self._times(X)
        out = np.zeros((ns.size, self.depth), dtype=int)
        if not ns.size:
            return out
        sim = Simulator(self.x_init_, self.rule_)
        order = np.argsort(ns, kind="stable")
        t = 0
        for i in order:
            while t < ns[i]:
                sim.step()
                t += 1
            out[i] = [s.label for s in decode_symbols(sim, self.rule_, self.depth)]
        return out

    def predict(self, X):
        """Labels of the adic orbit of the minimal path at the same times."""
        ns = self._times(X)
        out = np.zeros((ns.size, self.depth), dtype=int)
        if not ns.size:
            return out
        want = {int(n) for n in ns}
        rows = {}
        for t, p in enumerate(iterate(self.diagram_, minimal_path(self.diagram_))):
            if t in want:
                rows[t] = pad(self.diagram_, p, self.depth).labels[: self.depth]
            if t >= max(want):
                break
        for i, n in enumerate(ns):
            out[i] = rows[int(n)]
        return out

    def score(self, X, y=None):
        """Fraction of times where the automaton and the adic orbit agree."""
        a, b = self.transform(X), self.predict(X)
        return float(np.mean(np.all(a == b, axis=1))) if len(a) else 1.0
