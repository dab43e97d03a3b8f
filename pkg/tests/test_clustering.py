"""Tests for cosine similarity and agglomerative clustering."""

import numpy as np
import pytest
from scipy.cluster.hierarchy import linkage as scipy_linkage
from scipy.spatial.distance import squareform

from rbmvec.clustering import (
    LinkageRule,
    SimilarityMatrix,
    StopRule,
    ahc,
    build_similarity_matrix,
    cosine_similarity,
    cut_dendrogram,
    load_clusters,
    save_clusters,
    save_merge_history,
    sweep_threshold,
)
from rbmvec.errors import DegenerateVector, InvalidStop, MatrixError, ShapeError
from rbmvec.rbm import Supervector


def random_matrix(rng, n, quantize=False):
    scores = rng.uniform(0.01, 0.99, size=(n, n))
    if quantize:
        # coarse grid so ties actually happen
        scores = np.round(scores * 8) / 8
    scores = np.triu(scores, k=1)
    scores = scores + scores.T
    np.fill_diagonal(scores, 1.0)
    return SimilarityMatrix(scores, tuple(f"x{i:02d}" for i in range(n)))


def reference_ahc(matrix, rule, stop):
    """Rescan every live pair at each step; cluster scores kept per pair."""
    ids = matrix.ids
    clusters = [[i] for i in range(matrix.size)]
    score = {(a, b): matrix.scores[a, b] for a in range(matrix.size) for b in range(matrix.size) if a != b}
    merges = []
    while len(clusters) > 1:
        if stop.kind.value == "num_clusters" and len(clusters) <= stop.value:
            break
        best, pair = None, None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                s = score[(clusters[i][0], clusters[j][0])]
                if best is None or s > best:
                    best, pair = s, (i, j)
        if stop.kind.value == "threshold" and best < stop.value:
            break
        i, j = pair
        a, b = clusters[i], clusters[j]
        merges.append(([ids[m] for m in a], [ids[m] for m in b], best))
        key_a, key_b = a[0], b[0]
        for k, other in enumerate(clusters):
            if k in (i, j):
                continue
            sa, sb = score[(key_a, other[0])], score[(key_b, other[0])]
            if rule.kind.value == "single":
                new = max(sa, sb)
            elif rule.size_weighted:
                new = (len(a) * sa + len(b) * sb) / (len(a) + len(b))
            else:
                new = 0.5 * (sa + sb)
            merged_key = min(key_a, key_b)
            score[(merged_key, other[0])] = new
            score[(other[0], merged_key)] = new
        clusters[i] = sorted(a + b)
        del clusters[j]
    return clusters, merges


class TestCosine:
    """Test pairwise cosine scores."""

    def test_examples(self):
        """Orthogonal, parallel and opposite vectors."""
        assert cosine_similarity([1.0, 0.0], [0.0, 1.0]) == 0.0
        assert cosine_similarity([1.0, 1.0], [2.0, 2.0]) == pytest.approx(1.0)
        assert cosine_similarity([1.0, 0.0], [-3.0, 0.0]) == -1.0

    def test_zero_vector(self):
        """A zero-norm vector has no direction."""
        with pytest.raises(DegenerateVector):
            cosine_similarity([0.0, 0.0], [1.0, 0.0])

    def test_extreme_magnitudes(self):
        """Huge and tiny nonzero vectors still have a direction."""
        assert cosine_similarity([1e200, 1e200], [1e200, 1e200]) == pytest.approx(1.0)
        assert cosine_similarity([1e-200, 0.0], [1e-200, 0.0]) == 1.0
        assert cosine_similarity([1e200, 0.0], [0.0, 1e-200]) == 0.0
        matrix = build_similarity_matrix([
            Supervector(np.array([1e200, 1e200]), "big"),
            Supervector(np.array([1e-200, 1e-200]), "small"),
            Supervector(np.array([-3.0, 0.0]), "plain"),
        ])
        assert np.all(np.isfinite(matrix.scores))
        assert matrix.scores[0, 1] == pytest.approx(1.0)
        assert matrix.scores[0, 2] == pytest.approx(-np.sqrt(0.5))

    def test_dimension_mismatch(self):
        """Vectors must have the same length."""
        with pytest.raises(ShapeError):
            cosine_similarity([1.0], [1.0, 2.0])

    def test_matrix(self, rng):
        """All-pairs matrix is symmetric, unit diagonal, matches pairwise scores."""
        vectors = [Supervector(rng.normal(size=5), f"v{i}") for i in range(6)]
        matrix = build_similarity_matrix(vectors)
        assert matrix.ids == tuple(f"v{i}" for i in range(6))
        assert matrix.is_symmetric()
        assert np.all(np.diag(matrix.scores) == 1.0)
        assert np.all(np.abs(matrix.scores) <= 1.0)
        assert matrix.scores[1, 4] == pytest.approx(cosine_similarity(vectors[1].values, vectors[4].values), abs=1e-14)

    def test_matrix_scale_invariant(self, rng):
        """Rescaling a vector leaves its scores unchanged."""
        values = [rng.normal(size=4) for _ in range(3)]
        a = build_similarity_matrix([Supervector(v, str(i)) for i, v in enumerate(values)])
        b = build_similarity_matrix([Supervector(v * (i + 2.5), str(i)) for i, v in enumerate(values)])
        np.testing.assert_allclose(a.scores, b.scores, atol=1e-14)

    def test_matrix_needs_two_vectors(self):
        """One item cannot be scored against anything."""
        with pytest.raises(ShapeError):
            build_similarity_matrix([Supervector(np.ones(2), "a")])

    def test_matrix_zero_vector_named(self):
        """The degenerate item is named."""
        with pytest.raises(DegenerateVector) as info:
            build_similarity_matrix([Supervector(np.ones(2), "a"), Supervector(np.zeros(2), "b")])
        assert info.value.item_id == "b"

    def test_non_square_rejected(self):
        """Score matrices are square."""
        with pytest.raises(MatrixError):
            SimilarityMatrix(np.zeros((2, 3)), ("a", "b"))


class TestAhc:
    """Test agglomerative clustering."""

    @pytest.fixture
    def three(self):
        scores = np.array([[1.0, 0.9, 0.1], [0.9, 1.0, 0.5], [0.1, 0.5, 1.0]])
        return SimilarityMatrix(scores, ("a", "b", "c"))

    def test_average_linkage_example(self, three):
        """(a, b) merge first; c then scores (0.1 + 0.5) / 2 against them."""
        result = ahc(three, LinkageRule.average(), StopRule.num_clusters(1))
        assert [m.score for m in result.merges] == [0.9, pytest.approx(0.3)]
        assert result.merges[0].members_a == ("a",)
        assert result.merges[0].members_b == ("b",)

    def test_single_linkage_example(self, three):
        """Single linkage takes the best member pair."""
        result = ahc(three, LinkageRule.single(), StopRule.num_clusters(1))
        assert [m.score for m in result.merges] == [0.9, 0.5]

    def test_threshold_stops(self, three):
        """θ = 0.4 separates c under average linkage but not under single."""
        average = ahc(three, LinkageRule.average(), StopRule.threshold(0.4))
        single = ahc(three, LinkageRule.single(), StopRule.threshold(0.4))
        assert average.assignment == {"a": 0, "b": 0, "c": 1}
        assert average.final_cluster_count == 2
        assert single.final_cluster_count == 1
        assert average.clusters() == [["a", "b"], ["c"]]

    def test_huge_threshold_gives_singletons(self, three):
        """No score reaches θ, nothing merges."""
        result = ahc(three, LinkageRule.average(), StopRule.threshold(10.0))
        assert result.assignment == {"a": 0, "b": 1, "c": 2}
        assert result.merges == ()

    def test_size_weighted_average(self):
        """Size weighting counts each original member once."""
        scores = np.array([
            [1.0, 0.9, 0.2, 0.0],
            [0.9, 1.0, 0.1, 0.0],
            [0.2, 0.1, 1.0, 0.8],
            [0.0, 0.0, 0.8, 1.0],
        ])
        matrix = SimilarityMatrix(scores, ("a", "b", "c", "d"))
        weighted = ahc(matrix, LinkageRule.average(size_weighted=True), StopRule.num_clusters(1))
        # last merge: mean of the four cross scores
        assert weighted.merges[-1].score == pytest.approx((0.2 + 0.0 + 0.1 + 0.0) / 4)

    def test_tie_break_smallest_pair(self):
        """Equal scores merge the lowest-index pair first."""
        scores = np.full((4, 4), 0.5)
        np.fill_diagonal(scores, 1.0)
        result = ahc(SimilarityMatrix(scores, ("a", "b", "c", "d")), LinkageRule.average(), StopRule.num_clusters(3))
        assert result.merges[0].members_a == ("a",)
        assert result.merges[0].members_b == ("b",)

    def test_too_many_clusters(self, three):
        """k cannot exceed N."""
        with pytest.raises(InvalidStop):
            ahc(three, LinkageRule.average(), StopRule.num_clusters(4))

    def test_invalid_stop_values(self):
        """k >= 1 and θ a number."""
        with pytest.raises(InvalidStop):
            StopRule.num_clusters(0)
        with pytest.raises(InvalidStop):
            StopRule.threshold(float("nan"))

    def test_asymmetric_rejected(self):
        """Merging needs a symmetric matrix."""
        scores = np.array([[1.0, 0.2], [0.3, 1.0]])
        with pytest.raises(MatrixError):
            ahc(SimilarityMatrix(scores, ("a", "b")), LinkageRule.average(), StopRule.num_clusters(1))

    @pytest.mark.parametrize("rule", [LinkageRule.single(), LinkageRule.average(), LinkageRule.average(True)])
    def test_matches_rescanning_reference(self, rng, rule):
        """Partition and merge order equal the naive rescanning implementation."""
        for trial in range(70):
            n = int(rng.integers(2, 65))
            matrix = random_matrix(rng, n, quantize=trial % 3 == 0)
            if trial % 2:
                stop = StopRule.threshold(float(rng.uniform(0.2, 0.8)))
            else:
                stop = StopRule.num_clusters(int(rng.integers(1, n + 1)))
            result = ahc(matrix, rule, stop)
            clusters, merges = reference_ahc(matrix, rule, stop)
            assert [(list(m.members_a), list(m.members_b), m.score) for m in result.merges] == merges
            assert sorted(result.clusters()) == sorted([[matrix.ids[i] for i in c] for c in clusters])
            assert result.final_cluster_count == len(clusters)

    @pytest.mark.parametrize("rule, method", [
        (LinkageRule.single(), "single"),
        (LinkageRule.average(), "weighted"),
        (LinkageRule.average(True), "average"),
    ])
    def test_merge_heights_match_scipy(self, rng, rule, method):
        """Merge scores equal 1 - scipy's merge distances on d = 1 - s."""
        for _ in range(20):
            n = int(rng.integers(3, 30))
            matrix = random_matrix(rng, n)
            result = ahc(matrix, rule, StopRule.num_clusters(1))
            distances = squareform(1.0 - matrix.scores, checks=False)
            Z = scipy_linkage(distances, method=method)
            np.testing.assert_allclose(
                np.sort(1.0 - np.array([m.score for m in result.merges])),
                np.sort(Z[:, 2]),
                atol=1e-12,
            )

    def test_single_linkage_monotone_invariance(self, rng):
        """x -> x^3 keeps the single-linkage merge sequence."""
        for _ in range(50):
            matrix = random_matrix(rng, int(rng.integers(2, 30)))
            cubed = SimilarityMatrix(matrix.scores ** 3, matrix.ids)
            a = ahc(matrix, LinkageRule.single(), StopRule.num_clusters(1))
            b = ahc(cubed, LinkageRule.single(), StopRule.num_clusters(1))
            assert [(m.members_a, m.members_b) for m in a.merges] == [(m.members_a, m.members_b) for m in b.merges]

    @pytest.mark.parametrize("rule", [LinkageRule.single(), LinkageRule.average(), LinkageRule.average(True)])
    def test_input_order_does_not_matter(self, rng, rule):
        """With distinct scores a permuted matrix gives the same clusters."""
        for _ in range(30):
            n = int(rng.integers(2, 25))
            matrix = random_matrix(rng, n)
            perm = rng.permutation(n)
            shuffled = SimilarityMatrix(matrix.scores[np.ix_(perm, perm)], tuple(matrix.ids[k] for k in perm))
            stop = StopRule.threshold(float(rng.uniform(0.2, 0.8)))
            a = ahc(matrix, rule, stop)
            b = ahc(shuffled, rule, stop)
            assert {frozenset(c) for c in a.clusters()} == {frozenset(c) for c in b.clusters()}
            assert [m.score for m in a.merges] == [m.score for m in b.merges]

    @pytest.mark.parametrize("rule", [LinkageRule.single(), LinkageRule.average()])
    def test_threshold_equals_its_cluster_count(self, rng, rule):
        """Stopping at θ or at the number of clusters θ leaves is the same run."""
        for trial in range(40):
            n = int(rng.integers(2, 40))
            matrix = random_matrix(rng, n, quantize=trial % 2 == 0)
            by_threshold = ahc(matrix, rule, StopRule.threshold(float(rng.uniform(0.1, 0.9))))
            by_count = ahc(matrix, rule, StopRule.num_clusters(by_threshold.final_cluster_count))
            assert by_count.assignment == by_threshold.assignment
            assert by_count.merges == by_threshold.merges

    def test_cluster_indices_follow_first_member(self, rng):
        """Cluster k's first member comes before cluster k+1's."""
        matrix = random_matrix(rng, 20)
        result = ahc(matrix, LinkageRule.average(), StopRule.num_clusters(5))
        firsts = [matrix.ids.index(c[0]) for c in result.clusters()]
        assert firsts == sorted(firsts)


class TestSweep:
    """Test dendrogram cuts and threshold sweeps."""

    @pytest.mark.parametrize("rule", [LinkageRule.single(), LinkageRule.average()])
    def test_sweep_equals_independent_runs(self, rng, rule):
        """Cutting one full run equals re-running at each θ."""
        thetas = [0.9, 0.7, 0.5, 0.3, 0.1]
        for _ in range(10):
            matrix = random_matrix(rng, int(rng.integers(2, 40)))
            for theta, cut in sweep_threshold(matrix, rule, thetas):
                direct = ahc(matrix, rule, StopRule.threshold(theta))
                assert cut.assignment == direct.assignment
                assert cut.merges == direct.merges
                assert cut.final_cluster_count == direct.final_cluster_count

    def test_cluster_count_monotone(self, rng):
        """Lower θ never gives more clusters."""
        matrix = random_matrix(rng, 30)
        thetas = list(np.linspace(0.95, 0.05, 19))
        counts = [r.final_cluster_count for _, r in sweep_threshold(matrix, LinkageRule.average(), thetas)]
        assert counts == sorted(counts, reverse=True)

    def test_cut_keeps_sweep_order(self, rng):
        """Results come back in the order the thresholds were given."""
        matrix = random_matrix(rng, 8)
        thetas = [0.2, 0.8, 0.5]
        assert [t for t, _ in sweep_threshold(matrix, LinkageRule.single(), thetas)] == thetas

    def test_cut_of_full_run_at_minus_infinity(self, rng):
        """θ below every score keeps all merges."""
        matrix = random_matrix(rng, 6)
        full = ahc(matrix, LinkageRule.average(), StopRule.num_clusters(1))
        assert cut_dendrogram(full, matrix.ids, -np.inf).final_cluster_count == 1

    def test_empty_sweep(self, rng):
        """A sweep needs thresholds."""
        with pytest.raises(InvalidStop):
            sweep_threshold(random_matrix(rng, 3), LinkageRule.average(), [])


class TestClusterFiles:
    """Test cluster and merge files."""

    def test_clusters_round_trip(self, workdir):
        """Cluster CSV keeps item order; indices come back as text."""
        save_clusters({"b": 1, "a": 0}, workdir / "clusters.csv")
        assert (workdir / "clusters.csv").read_text() == "item_id,cluster_index\nb,1\na,0\n"
        assert load_clusters(workdir / "clusters.csv") == {"b": "1", "a": "0"}

    def test_merge_history(self, workdir):
        """One row per merge, members joined by ';'."""
        scores = np.array([[1.0, 0.9, 0.1], [0.9, 1.0, 0.5], [0.1, 0.5, 1.0]])
        result = ahc(SimilarityMatrix(scores, ("a", "b", "c")), LinkageRule.single(), StopRule.num_clusters(1))
        save_merge_history(result.merges, workdir / "merges.csv")
        assert (workdir / "merges.csv").read_text() == (
            "step,score,members_a,members_b\n1,0.9,a,b\n2,0.5,a;b,c\n"
        )
