"""Keyed random streams.

Every random draw is taken from a Philox generator whose key is derived from
(seed, role, grid index, subject block). A subject's draws therefore depend
only on its own index and never on how blocks are scheduled across threads.
"""
import numpy as np

BLOCK_SIZE = 4096

BASELINE = 0
TREATMENT = 1
TRANSITION = 2
CENSORING = 3
TERMINAL = 4


def keyed_generator(seed, role, index, block):
    """Returns the generator owning one (role, grid index, block) cell

    :param seed: experiment seed (non-negative integer)
    :param role: one of the draw-role constants of this module
    :param index: fine-grid index of the draw
    :param block: subject block number
    :return numpy.random.Generator
    """
    sequence = np.random.SeedSequence([int(seed), int(role), int(index),
                                       int(block)])
    return np.random.Generator(np.random.Philox(sequence))


def derive_seed(seed, *path):
    """Derives a child seed, e.g. one per replication"""
    sequence = np.random.SeedSequence([int(seed)] + [int(p) for p in path])
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


def block_bounds(n, block_size=BLOCK_SIZE):
    """Yields (block, start, stop) covering subjects 0..n-1"""
    for block, start in enumerate(range(0, n, block_size)):
        yield block, start, min(start + block_size, n)


class BlockStreams(object):
    """Draw source for the subjects of one block.

    Each (role, index) cell is drawn with one call of size ``count`` so the
    first draws of a cell never depend on the block's population.
    """

    def __init__(self, seed, block, count):
        self.seed = seed
        self.block = block
        self.count = count

    def generator(self, role, index):
        return keyed_generator(self.seed, role, index, self.block)

    def uniform(self, role, index):
        return self.generator(role, index).random(self.count)
