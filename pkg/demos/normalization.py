"""Scramble a stack of kidneys with random moves, then bring it back.

Run with ``python3 demos/normalization.py [n] [seed]``.
"""
import sys

from modblob import invariant_J, kidney, normalize_embedded, scramble
from modblob.rewriting import M1, M2, M4, bounded_equivalence

n = int(sys.argv[1]) if len(sys.argv) > 1 else 2
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0

# %% Scrambling only uses moves that keep the region embedded.
start = kidney(n)
x = scramble(start, seed, 40, kinds=(M1, M2, M4))
print("start     ", start.word())
print("scrambled ", x.word())
print("J before and after:", invariant_J(start), invariant_J(x))

# %% Normalization returns the canonical stack plus a replayable trace.
out, trace = normalize_embedded(x)
print("normalized", out.word())
print("trace of", len(trace.moves), "moves; replays:", trace.check())

# %% A short search finds no path from kidney(1) to kidney(-1); J already rules it out.
print("kidney(1) ~ kidney(-1)?", bounded_equivalence(kidney(1), kidney(-1), 6))
