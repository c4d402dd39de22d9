import numpy as np
import pytest

from multiportlab.core import random_unitary
from multiportlab.scattering import ScatterNetwork, ScatterNode, internal_spectral_radius

GROVER3 = (-1j / 3) * np.array([[1, -2, -2], [-2, 1, -2], [-2, -2, 1]])
COUPLING = np.array([[1, -2, -2], [-2, 1, -2], [-2, -2, 1]], dtype=float)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_network(rng, max_ports=12, max_radius=0.6):
    """Haar-random nodes with a random internal matching; weakly resonant only."""
    while True:
        sizes = list(rng.integers(2, 5, size=rng.integers(2, 4)))
        while sum(sizes) > max_ports:
            sizes.pop()
        nodes = [ScatterNode(f"n{i}", random_unitary(int(s), rng)) for i, s in enumerate(sizes)]
        ports = [(nd.id, p) for nd in nodes for p in range(nd.smatrix.shape[0])]
        order = rng.permutation(len(ports))
        # leave at least one external port
        n_int = 2 * int(rng.integers(1, (len(ports) - 1) // 2 + 1))
        paired = [ports[i] for i in order[:n_int]]
        edges = [(paired[2 * i], paired[2 * i + 1], float(rng.uniform(0, 2 * np.pi))) for i in range(n_int // 2)]
        external = [ports[i] for i in order[n_int:]]
        net = ScatterNetwork(tuple(nodes), tuple(edges), tuple(external))
        if internal_spectral_radius(net) <= max_radius:
            return net
