"""
Set Sampling

Seeded construction of the subsets X_1, ..., X_k of F_q fed to expansion
runs. The generator is numpy's PCG64, seeded explicitly; OS entropy is never
used.

Set descriptors (one per set, separated by ';', a single entry applies to
every set):

    full                every element of F_q
    uniform:S           S distinct elements drawn from the run's generator
    interval:S          S consecutive residues (prime fields only)
    random:S:SEED       S distinct elements from a generator of its own
    [e1, e2, ...]       explicit elements (integers, or coefficient lists
                        in extension fields)
"""

import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from algebra.gf import FieldCtx, FieldElement
from config import DEFAULT_SEED, U64_MAX
from errors import FFExpandError, SamplingError


REJECTION_THRESHOLD = 1 << 24


class SetMode(Enum):
    FULL = "full"
    UNIFORM = "uniform"
    INTERVAL = "interval"
    EXPLICIT = "explicit"


def make_rng(seed: int = DEFAULT_SEED) -> np.random.Generator:
    if not 0 <= int(seed) <= U64_MAX:
        raise SamplingError(f"Seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(int(seed)))


def distinct_integers(rng: np.random.Generator, population: int, size: int) -> np.ndarray:
    """`size` distinct integers from [0, population), sorted."""
    if size < 0 or size > population:
        raise SamplingError(f"Cannot draw {size} distinct values from {population}")
    if population <= REJECTION_THRESHOLD:
        return np.sort(rng.choice(population, size=size, replace=False).astype(np.int64))
    chosen: dict[int, None] = {}
    while len(chosen) < size:
        for value in rng.integers(0, population, size=2 * (size - len(chosen)) + 1).tolist():
            chosen.setdefault(value, None)
            if len(chosen) == size:
                break
    return np.sort(np.fromiter(chosen, dtype=np.int64, count=size))


def sample_set(ctx: FieldCtx, size: int, mode: SetMode, rng: np.random.Generator) -> np.ndarray:
    """Sorted element codes of one subset."""
    if mode is SetMode.FULL:
        return np.arange(ctx.q, dtype=np.int64)
    if size < 0 or size > ctx.q:
        raise SamplingError(f"Set size {size} outside [0, {ctx.q}]")
    if mode is SetMode.UNIFORM:
        return distinct_integers(rng, ctx.q, size)
    if mode is SetMode.INTERVAL:
        if ctx.k != 1:
            raise SamplingError("Interval sets need a prime field")
        start = int(rng.integers(0, ctx.p - size + 1))
        return np.arange(start, start + size, dtype=np.int64)
    raise SamplingError(f"Mode {mode.value} cannot be sampled")


def sample_sets(
    ctx: FieldCtx,
    sizes: list[int],
    mode: SetMode | str,
    seed: int = DEFAULT_SEED,
) -> list[np.ndarray]:
    """One subset per requested size, drawn in order from one seeded generator."""
    mode = SetMode(mode) if isinstance(mode, str) else mode
    rng = make_rng(seed)
    return [sample_set(ctx, size, mode, rng) for size in sizes]


@dataclass(frozen=True)
class SetDescriptor:
    mode: SetMode
    size: Optional[int] = None
    seed: Optional[int] = None
    values: Optional[tuple] = None

    def build(self, ctx: FieldCtx, rng: np.random.Generator) -> np.ndarray:
        if self.mode is SetMode.EXPLICIT:
            try:
                codes = {
                    FieldElement.from_json(ctx, list(v) if isinstance(v, tuple) else v).value
                    for v in self.values
                }
            except (FFExpandError, TypeError, ValueError) as e:
                raise SamplingError(f"Bad explicit set element: {e}")
            return np.array(sorted(codes), dtype=np.int64)
        own = make_rng(self.seed) if self.seed is not None else rng
        return sample_set(ctx, self.size or 0, self.mode, own)


def _parse_entry(text: str) -> SetDescriptor:
    text = text.strip()
    if text == "full":
        return SetDescriptor(SetMode.FULL)
    if text.startswith("["):
        try:
            values = json.loads(text)
        except json.JSONDecodeError as e:
            raise SamplingError(f"Explicit set '{text}' is not a JSON list: {e}")
        if not isinstance(values, list):
            raise SamplingError(f"Explicit set '{text}' must be a list")
        return SetDescriptor(SetMode.EXPLICIT, values=tuple(tuple(v) if isinstance(v, list) else v for v in values))
    parts = text.split(":")
    try:
        if parts[0] in ("uniform", "interval") and len(parts) == 2:
            return SetDescriptor(SetMode(parts[0]), size=int(parts[1]))
        if parts[0] == "random" and len(parts) == 3:
            return SetDescriptor(SetMode.UNIFORM, size=int(parts[1]), seed=int(parts[2]))
    except ValueError:
        pass
    raise SamplingError(
        f"Malformed set descriptor '{text}'; expected full, uniform:S, interval:S, random:S:SEED or [..]"
    )


def parse_set_descriptors(text: str, count: int) -> list[SetDescriptor]:
    entries = [_parse_entry(piece) for piece in str(text).split(";") if piece.strip()]
    if len(entries) == 1:
        return entries * count
    if len(entries) != count:
        raise SamplingError(f"{len(entries)} set descriptors for {count} sets")
    return entries


def build_sets(ctx: FieldCtx, text: str, count: int, seed: int = DEFAULT_SEED) -> list[np.ndarray]:
    """Build `count` subsets from a descriptor string with one run generator."""
    rng = make_rng(seed)
    return [descriptor.build(ctx, rng) for descriptor in parse_set_descriptors(text, count)]
