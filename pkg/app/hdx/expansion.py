"""Local-spectral expansion: gamma over the underlying graphs of all links."""
import logging
from typing import Tuple

import networkx as nx
import numpy as np

from .complex import SimplicialComplex, link
from .errors import LevelError
from .logging_config import log_numerical_event
from .models import LinkSpectrum, SpectralProfile

logger = logging.getLogger(__name__)


def link_graph(complex_: SimplicialComplex) -> nx.Graph:
    """Weighted underlying graph: vertices X(1), edges X(2) weighted by pi_2."""
    graph = nx.Graph()
    graph.add_nodes_from(face[0] for face in complex_.faces(1))
    for face, weight in zip(complex_.faces(2), complex_.measure(2)):
        graph.add_edge(face[0], face[1], weight=float(weight))
    return graph


def graph_walk_spectrum(graph: nx.Graph) -> Tuple[np.ndarray, bool]:
    """Eigenvalues (descending) of the random walk on a weighted graph, and connectivity."""
    nodes = sorted(graph.nodes)
    adjacency = nx.to_numpy_array(graph, nodelist=nodes, weight="weight")
    degrees = adjacency.sum(axis=1)
    scale = 1.0 / np.sqrt(degrees)
    symmetric = scale[:, None] * adjacency * scale[None, :]
    eigenvalues = np.sort(np.linalg.eigvalsh(symmetric))[::-1]
    return eigenvalues, nx.is_connected(graph)


def link_spectrum(complex_: SimplicialComplex, face: Tuple[int, ...]) -> LinkSpectrum:
    view = link(complex_, face)
    eigenvalues, connected = graph_walk_spectrum(link_graph(view.complex))
    second = float(eigenvalues[1]) if eigenvalues.size > 1 else 0.0
    smallest = float(eigenvalues[-1]) if eigenvalues.size > 1 else 0.0
    expansion = 1.0 if not connected else max(abs(second), abs(smallest))
    return LinkSpectrum(
        face=face,
        level=len(face),
        second_eigenvalue=second,
        smallest_eigenvalue=smallest,
        expansion=min(1.0, expansion),
        connected=connected,
    )


def measure_gamma(complex_: SimplicialComplex) -> SpectralProfile:
    """Two-sided local-spectral expansion over links at levels 0..d-2."""
    if complex_.dimension < 2:
        raise LevelError("gamma needs a complex of dimension at least 2")

    def build() -> SpectralProfile:
        table = []
        for level in range(complex_.dimension - 1):
            for face in complex_.faces(level):
                table.append(link_spectrum(complex_, face))
        disconnected = [entry.face for entry in table if not entry.connected]
        for face in disconnected:
            log_numerical_event(logger, "DISCONNECTED_LINK", {"face": list(face), "complex_id": complex_.uid[:12]})
        worst = max(table, key=lambda entry: entry.expansion)
        return SpectralProfile(
            gamma=worst.expansion,
            gamma_witness=worst.face,
            links=table,
            disconnected=disconnected,
        )

    return complex_.cached(("gamma",), build)


def gamma_of(complex_: SimplicialComplex) -> float:
    return float(measure_gamma(complex_).gamma)


def gamma_or_zero(complex_: SimplicialComplex) -> float:
    """gamma, or 0 for complexes of dimension below 2 (no link has edges)."""
    return gamma_of(complex_) if complex_.dimension >= 2 else 0.0
