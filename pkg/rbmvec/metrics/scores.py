"""Pairwise and BCubed precision / recall / F-score.

Counts are exact integers and the ratios are kept as Fractions until the
very end, so a score is the correctly rounded double of its true value.

Conventions: pairwise precision is 1 when the prediction co-clusters no
pair, pairwise recall is 1 when the truth co-clusters no pair, and F is 0
when precision + recall is 0.
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Tuple

from rbmvec.errors import EmptyInput, ItemMismatch

Partition = Mapping[str, Hashable]
Scores = Tuple[float, float, float]


def _check_items(pred: Partition, truth: Partition) -> None:
    if pred.keys() != truth.keys():
        only_pred = len(pred.keys() - truth.keys())
        only_truth = len(truth.keys() - pred.keys())
        raise ItemMismatch(
            f"prediction and truth cover different items ({only_pred} only predicted, {only_truth} only in truth)"
        )
    if not pred:
        raise EmptyInput("cannot score an empty partition", module="metrics")


def _harmonic(p: Fraction, r: Fraction) -> Fraction:
    if p + r == 0:
        return Fraction(0)
    return 2 * p * r / (p + r)


def _pairs(n: int) -> int:
    return n * (n - 1) // 2


def _tables(pred: Partition, truth: Partition):
    joint = Counter((pred[e], truth[e]) for e in pred)
    pred_sizes = Counter(pred.values())
    true_sizes = Counter(truth.values())
    return joint, pred_sizes, true_sizes


def pairwise_f(pred: Partition, truth: Partition) -> Scores:
    """Precision/recall over unordered item pairs placed together."""
    _check_items(pred, truth)
    joint, pred_sizes, true_sizes = _tables(pred, truth)
    together = sum(_pairs(n) for n in joint.values())
    pred_pairs = sum(_pairs(n) for n in pred_sizes.values())
    true_pairs = sum(_pairs(n) for n in true_sizes.values())

    precision = Fraction(together, pred_pairs) if pred_pairs else Fraction(1)
    recall = Fraction(together, true_pairs) if true_pairs else Fraction(1)
    return float(precision), float(recall), float(_harmonic(precision, recall))


def bcubed_f(pred: Partition, truth: Partition) -> Scores:
    """Item-averaged precision/recall of each item's cluster against its class."""
    _check_items(pred, truth)
    joint, pred_sizes, true_sizes = _tables(pred, truth)
    n = len(pred)
    # every item in cell (c, k) shares the same per-item ratio n_ck / size
    precision = sum(Fraction(count * count, pred_sizes[c]) for (c, _), count in joint.items()) / n
    recall = sum(Fraction(count * count, true_sizes[k]) for (_, k), count in joint.items()) / n
    return float(precision), float(recall), float(_harmonic(precision, recall))


@dataclass(frozen=True)
class EvalReport:
    pairwise: Scores
    bcubed: Scores
    n_items: int
    n_pred_clusters: int
    n_true_clusters: int

    CSV_HEADER = "Fp_precision,Fp_recall,Fp,Fb_precision,Fb_recall,Fb,n_items,n_pred,n_true"

    @property
    def fp(self) -> float:
        return self.pairwise[2]

    @property
    def fb(self) -> float:
        return self.bcubed[2]

    def to_csv_row(self) -> str:
        values = [*self.pairwise, *self.bcubed]
        cells = [repr(float(v)) for v in values]
        cells += [str(self.n_items), str(self.n_pred_clusters), str(self.n_true_clusters)]
        return ",".join(cells)

    def to_csv(self) -> str:
        return f"{self.CSV_HEADER}\n{self.to_csv_row()}\n"

    def to_text(self) -> str:
        p, r, f = self.pairwise
        bp, br, bf = self.bcubed
        return (
            f"items: {self.n_items}  predicted clusters: {self.n_pred_clusters}  "
            f"true clusters: {self.n_true_clusters}\n"
            f"Pairwise F-score  Fp = {f:.4f}  (precision {p:.4f}, recall {r:.4f})\n"
            f"BCubed F-score    Fb = {bf:.4f}  (precision {bp:.4f}, recall {br:.4f})\n"
        )


def evaluate(pred: Partition, truth: Partition) -> EvalReport:
    return EvalReport(
        pairwise=pairwise_f(pred, truth),
        bcubed=bcubed_f(pred, truth),
        n_items=len(pred),
        n_pred_clusters=len(set(pred.values())),
        n_true_clusters=len(set(truth.values())),
    )
