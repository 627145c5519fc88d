"""Dataset ingestion, topic filtering, user preference weights and synthetic data.

File formats (UTF-8, header row required):

* relevance: ``movie_id,topic_id,score`` with score in [0, 1]; every
  (movie, topic) pair must appear exactly once.
* ratings: ``user_id,movie_id,rating`` with rating in [0, 5].
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass

import numpy as np

from ..coverage import CoverageModel
from ..errors import EmptyResultError, ParseError
from ..oracle import make_rng

log = logging.getLogger(__name__)

RELEVANCE_HEADER = ["movie_id", "topic_id", "score"]
RATINGS_HEADER = ["user_id", "movie_id", "rating"]
WEIGHTS_HEADER = ["user_id", "topic_id", "weight"]

# Scores this close outside [0, 1] are treated as round-off and clamped.
_CLAMP_TOL = 1e-9


@dataclass
class RatingsTable:
    user_ids: list
    movie_ids: list
    users: np.ndarray      # row index into user_ids
    movies: np.ndarray     # row index into movie_ids
    ratings: np.ndarray

    def __len__(self) -> int:
        return len(self.ratings)


def _read_rows(path, header):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None or [c.strip() for c in first] != header:
            raise ParseError(f"expected header {','.join(header)}", line=1)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(row)}", line=lineno)
            yield lineno, [c.strip() for c in row]


def _number(text, lineno, lo, hi, what):
    try:
        v = float(text)
    except ValueError:
        raise ParseError(f"{what} {text!r} is not a number", line=lineno) from None
    if not np.isfinite(v) or v < lo - _CLAMP_TOL or v > hi + _CLAMP_TOL:
        raise ParseError(f"{what} {text} outside [{lo}, {hi}]", line=lineno)
    return min(max(v, lo), hi)


def load_relevance_csv(path) -> CoverageModel:
    movies: dict = {}
    topics: dict = {}
    cells: dict = {}
    for lineno, (movie, topic, score) in _read_rows(path, RELEVANCE_HEADER):
        value = _number(score, lineno, 0.0, 1.0, "score")
        i = movies.setdefault(movie, len(movies))
        j = topics.setdefault(topic, len(topics))
        if (i, j) in cells:
            raise ParseError(f"duplicate (movie, topic) pair ({movie}, {topic})", line=lineno)
        cells[(i, j)] = value
    if not cells:
        raise ParseError("relevance file has no rows")
    if len(cells) != len(movies) * len(topics):
        raise ParseError(f"relevance grid incomplete: {len(cells)} of "
                         f"{len(movies) * len(topics)} (movie, topic) pairs present")
    G = np.empty((len(movies), len(topics)))
    for (i, j), v in cells.items():
        G[i, j] = v
    return CoverageModel(G, list(movies), list(topics))


def write_relevance_csv(model: CoverageModel, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RELEVANCE_HEADER)
        for i, movie in enumerate(model.element_ids):
            for j, topic in enumerate(model.topic_ids):
                w.writerow([movie, topic, repr(float(model.relevance[i, j]))])


def load_ratings_csv(path) -> RatingsTable:
    users: dict = {}
    movies: dict = {}
    seen = set()
    u_idx, m_idx, vals = [], [], []
    for lineno, (user, movie, rating) in _read_rows(path, RATINGS_HEADER):
        value = _number(rating, lineno, 0.0, 5.0, "rating")
        if (user, movie) in seen:
            raise ParseError(f"duplicate rating for ({user}, {movie})", line=lineno)
        seen.add((user, movie))
        u_idx.append(users.setdefault(user, len(users)))
        m_idx.append(movies.setdefault(movie, len(movies)))
        vals.append(value)
    return RatingsTable(list(users), list(movies), np.array(u_idx, dtype=int),
                        np.array(m_idx, dtype=int), np.array(vals, dtype=float))


def write_ratings_csv(table: RatingsTable, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RATINGS_HEADER)
        for u, m, r in zip(table.users, table.movies, table.ratings):
            w.writerow([table.user_ids[u], table.movie_ids[m], repr(float(r))])


def write_weights_csv(W: np.ndarray, path, user_ids=None, topic_ids=None) -> None:
    user_ids = user_ids if user_ids is not None else range(W.shape[0])
    topic_ids = topic_ids if topic_ids is not None else range(W.shape[1])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(WEIGHTS_HEADER)
        for a, user in enumerate(user_ids):
            for i, topic in enumerate(topic_ids):
                w.writerow([user, topic, repr(float(W[a, i]))])


def _aligned(model: CoverageModel, ratings: RatingsTable):
    """Ratings restricted to movies present in the model, as (user, element, rating)."""
    lookup = {str(m): i for i, m in enumerate(model.element_ids)}
    elem = np.array([lookup.get(str(m), -1) for m in ratings.movie_ids], dtype=int)[ratings.movies]
    keep = elem >= 0
    return ratings.users[keep], elem[keep], ratings.ratings[keep]


def _corr(a: np.ndarray, b: np.ndarray) -> float:
    # constant columns have no defined correlation; treat as uncorrelated
    sa, sb = a.std(), b.std()
    if sa == 0 or sb == 0:
        return 0.0
    return float(np.mean((a - a.mean()) * (b - b.mean())) / (sa * sb))


def filter_topics_by_correlation(model: CoverageModel, ratings: RatingsTable,
                                 pair_cut: float = 0.4, rating_cut: float = 0.2) -> list:
    """Indices of topics kept after redundancy and rating-relevance pruning.

    For each pair ``i < j`` still alive with correlation >= ``pair_cut``, topic ``j``
    is dropped.  Survivors whose correlation with the per-movie mean rating is
    <= ``rating_cut`` are then dropped.
    """
    G = model.relevance
    alive = list(range(model.d))
    dropped = set()
    for i in range(model.d):
        if i in dropped:
            continue
        for j in range(i + 1, model.d):
            if j not in dropped and _corr(G[:, i], G[:, j]) >= pair_cut:
                dropped.add(j)
    alive = [i for i in alive if i not in dropped]

    _, elem, vals = _aligned(model, ratings)
    counts = np.bincount(elem, minlength=model.n)
    sums = np.bincount(elem, weights=vals, minlength=model.n)
    rated = counts > 0
    mean_rating = sums[rated] / counts[rated]
    keep = [i for i in alive if _corr(G[rated, i], mean_rating) > rating_cut]
    if not keep:
        raise EmptyResultError("no topic survives correlation filtering")
    return keep


def build_user_weights(model: CoverageModel, ratings: RatingsTable):
    """Per-user topic preferences ``W`` (rows sum to 1) and their mean.

    Returns ``(W, w_bar, user_ids, dropped)``; users whose ratings give no
    positive relevance mass are dropped and counted.
    """
    users, elem, vals = _aligned(model, ratings)
    mass = np.zeros((len(ratings.user_ids), model.d))
    np.add.at(mass, users, vals[:, None] * model.relevance[elem])
    totals = mass.sum(axis=1)
    keep = totals > 0
    dropped = int((~keep).sum())
    if dropped:
        log.warning("dropped %d users with no positive rating-relevance mass", dropped)
    if not keep.any():
        raise EmptyResultError("no user has positive rating-relevance mass")
    W = mass[keep] / totals[keep, None]
    kept_ids = [u for u, k in zip(ratings.user_ids, keep) if k]
    return W, W.mean(axis=0), kept_ids, dropped


def synthesize_dataset(n: int, d: int, num_users: int, seed: int, g_max: float = 0.3):
    """Random relevance ``G ~ U[0, g_max]`` and Dirichlet(1) user preference rows."""
    if min(n, d, num_users) < 1:
        raise ValueError("dataset sizes must be positive")
    rng = make_rng((int(seed), n, d, num_users))
    G = rng.uniform(0.0, g_max, size=(n, d))
    W = rng.dirichlet(np.ones(d), size=num_users)
    return CoverageModel(G), W


def synthesize_ratings(model: CoverageModel, W: np.ndarray, seed: int,
                       per_user: int = 20) -> RatingsTable:
    """Half-star ratings in [0.5, 5] for a random subset of movies per user.

    A user's rating grows with the preference-weighted relevance of the movie,
    scaled to that user's best movie.
    """
    rng = make_rng((int(seed), 7))
    k = min(per_user, model.n)
    users, movies, vals = [], [], []
    scores = W @ model.relevance.T
    for a in range(W.shape[0]):
        picks = np.sort(rng.choice(model.n, size=k, replace=False))
        s = scores[a, picks] / max(scores[a].max(), 1e-12)
        r = np.clip(np.round((0.5 + 4.5 * s) * 2) / 2, 0.5, 5.0)
        users.extend([a] * k)
        movies.extend(picks.tolist())
        vals.extend(r.tolist())
    return RatingsTable([str(a) for a in range(W.shape[0])], [str(m) for m in model.element_ids],
                        np.array(users), np.array(movies), np.array(vals))
