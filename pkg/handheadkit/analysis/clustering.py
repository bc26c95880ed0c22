"""Density-based clustering of semantic embeddings and cluster quality scores."""

import logging
import math
from typing import Sequence, Union

import numpy as np
import torch
from sklearn.cluster import HDBSCAN
from sklearn.metrics import calinski_harabasz_score, davies_bouldin_score
from sklearn.metrics.pairwise import cosine_distances

from handheadkit.core.errors import BadConfig, NeedTwoClusters, TooFew, UnknownCluster
from handheadkit.core.models import ClusterResult

logger = logging.getLogger(__name__)

DEFAULT_MIN_CLUSTER_SIZE = 15
NOISE = -1
IDENTICAL_TOLERANCE = 1e-12

EmbeddingsLike = Union[np.ndarray, torch.Tensor, Sequence[Sequence[float]]]


def _as_matrix(embeddings: EmbeddingsLike) -> np.ndarray:
    if isinstance(embeddings, torch.Tensor):
        embeddings = embeddings.detach().cpu().numpy()
    matrix = np.asarray(embeddings, dtype=np.float64)
    if matrix.ndim != 2:
        raise BadConfig(f"Embeddings must be a 2-D (samples, features) array, got shape {matrix.shape}")
    return matrix


def cluster(embeddings: EmbeddingsLike, min_cluster_size: int = DEFAULT_MIN_CLUSTER_SIZE) -> ClusterResult:
    """
    HDBSCAN clustering under cosine distance.

    Core distances use k = min_cluster_size neighbours; clusters smaller than min_cluster_size
    dissolve into noise (label -1). A set of identical directions forms a single cluster.

    Raises:
        TooFew: If there are fewer embeddings than min_cluster_size
        BadConfig: If min_cluster_size < 2
    """
    matrix = _as_matrix(embeddings)
    if min_cluster_size < 2:
        raise BadConfig(f"min_cluster_size must be at least 2, got {min_cluster_size}")
    if matrix.shape[0] < min_cluster_size:
        raise TooFew(f"{matrix.shape[0]} embedding(s), min_cluster_size is {min_cluster_size}")

    distances = cosine_distances(matrix)
    np.fill_diagonal(distances, 0.0)
    if np.all(distances <= IDENTICAL_TOLERANCE):
        labels = np.zeros(matrix.shape[0], dtype=int)
    else:
        model = HDBSCAN(min_cluster_size=min_cluster_size, min_samples=min_cluster_size, metric="precomputed")
        labels = model.fit_predict(distances)

    ids = sorted(set(int(v) for v in labels) - {NOISE})
    result = ClusterResult(labels=[int(v) for v in labels], n_clusters=len(ids))
    result.representatives = {cid: representative(matrix, result.labels, cid) for cid in ids}
    logger.info(f"Found {result.n_clusters} cluster(s), {result.n_noise} noise point(s) in {len(matrix)} embeddings")
    return result


def _clustered(embeddings: EmbeddingsLike, labels: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    matrix = _as_matrix(embeddings)
    label_array = np.asarray(labels, dtype=int)
    if label_array.shape[0] != matrix.shape[0]:
        raise BadConfig(f"{label_array.shape[0]} labels for {matrix.shape[0]} embeddings")
    keep = label_array != NOISE
    matrix, label_array = matrix[keep], label_array[keep]
    if np.unique(label_array).size < 2:
        raise NeedTwoClusters("Cluster quality needs at least two clusters (noise excluded)")
    return matrix, label_array


def dbi(embeddings: EmbeddingsLike, labels: Sequence[int]) -> float:
    """
    Davies-Bouldin index over Euclidean distances, noise excluded (lower is better).

    Raises:
        NeedTwoClusters: If fewer than two clusters remain
    """
    matrix, label_array = _clustered(embeddings, labels)
    return float(davies_bouldin_score(matrix, label_array))


def chi(embeddings: EmbeddingsLike, labels: Sequence[int]) -> float:
    """
    Calinski-Harabasz index, noise excluded (higher is better).

    Zero within-cluster dispersion gives +inf, logged as a saturated score.

    Raises:
        NeedTwoClusters: If fewer than two clusters remain
    """
    matrix, label_array = _clustered(embeddings, labels)
    within = 0.0
    for cid in np.unique(label_array):
        members = matrix[label_array == cid]
        within += float(np.sum((members - members.mean(axis=0)) ** 2))
    if within == 0.0:
        logger.warning("Calinski-Harabasz index saturated: clusters have zero within-cluster spread")
        return math.inf
    return float(calinski_harabasz_score(matrix, label_array))


def representative(embeddings: EmbeddingsLike, labels: Sequence[int], cluster_id: int) -> int:
    """
    Index of the cluster member closest (Euclidean) to the cluster centroid.

    Ties go to the lowest index.

    Raises:
        UnknownCluster: If no embedding carries ``cluster_id``
    """
    matrix = _as_matrix(embeddings)
    label_array = np.asarray(labels, dtype=int)
    members = np.flatnonzero(label_array == cluster_id)
    if cluster_id == NOISE or members.size == 0:
        raise UnknownCluster(f"No cluster with id {cluster_id}")
    centroid = matrix[members].mean(axis=0)
    distances = np.linalg.norm(matrix[members] - centroid, axis=1)
    return int(members[int(np.argmin(distances))])


def cluster_summary(result: ClusterResult, embeddings: EmbeddingsLike) -> dict:
    """Cluster report: labels, sizes, representatives, DBI and CHI (None with fewer than two clusters)."""
    summary: dict = {
        "n_clusters": result.n_clusters,
        "n_noise": result.n_noise,
        "labels": list(result.labels),
        "sizes": {str(k): v for k, v in result.sizes().items()},
        "representatives": {str(k): v for k, v in result.representatives.items()},
        "dbi": None,
        "chi": None,
    }
    if result.n_clusters >= 2:
        summary["dbi"] = dbi(embeddings, result.labels)
        score = chi(embeddings, result.labels)
        summary["chi"] = score if math.isfinite(score) else "inf"
    return summary
