"""Evaluation: token-level NER scoring with three averaging modes,
cross-validation aggregation, and whole-pipeline element/relation scoring.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

from .corpus import Document, IOB_TAGS, Mention, Relation


def f1_score(p: float, r: float) -> float:
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


@dataclass(frozen=True)
class ClassScores:
    label: str
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float

    @property
    def support(self) -> int:
        return self.tp + self.fn

    @staticmethod
    def from_counts(label: str, tp: int, fp: int, fn: int) -> "ClassScores":
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        return ClassScores(label, tp, fp, fn, p, r, f1_score(p, r))


@dataclass(frozen=True)
class Averages:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class MetricsReport:
    classes: dict[str, ClassScores]
    micro: Averages
    macro: Averages
    weighted: Averages

    @property
    def support(self) -> dict[str, int]:
        return {label: cs.support for label, cs in self.classes.items()}


def build_report(
    counts: dict[str, tuple[int, int, int]], exclude: frozenset[str] = frozenset()
) -> MetricsReport:
    """Assemble a report from per-class (tp, fp, fn) counts.

    Micro scores come from summed counts over all classes; macro is the
    unweighted mean and weighted the support-weighted mean over classes with
    support > 0, minus any excluded labels.
    """
    classes = {
        label: ClassScores.from_counts(label, *tpfpfn)
        for label, tpfpfn in counts.items()
    }
    tp = sum(c.tp for c in classes.values())
    fp = sum(c.fp for c in classes.values())
    fn = sum(c.fn for c in classes.values())
    micro_p = tp / (tp + fp) if tp + fp else 0.0
    micro_r = tp / (tp + fn) if tp + fn else 0.0
    micro = Averages(micro_p, micro_r, f1_score(micro_p, micro_r))
    scored = [
        c for label, c in classes.items() if c.support > 0 and label not in exclude
    ]
    if scored:
        n = len(scored)
        macro = Averages(
            sum(c.precision for c in scored) / n,
            sum(c.recall for c in scored) / n,
            sum(c.f1 for c in scored) / n,
        )
        total = sum(c.support for c in scored)
        weighted = Averages(
            sum(c.precision * c.support for c in scored) / total,
            sum(c.recall * c.support for c in scored) / total,
            sum(c.f1 * c.support for c in scored) / total,
        )
    else:
        macro = weighted = Averages(0.0, 0.0, 0.0)
    return MetricsReport(classes, micro, macro, weighted)


def classification_report(
    gold: list[str], pred: list[str], classes: list[str], exclude_labels: frozenset[str] = frozenset()
) -> MetricsReport:
    if len(gold) != len(pred):
        raise ValueError(f"{len(gold)} gold labels vs {len(pred)} predictions")
    counts = {label: [0, 0, 0] for label in classes}
    for g, p in zip(gold, pred):
        if g not in counts:
            raise ValueError(f"gold label {g!r} outside the class set")
        if p not in counts:
            raise ValueError(f"predicted label {p!r} outside the class set")
        if g == p:
            counts[g][0] += 1
        else:
            counts[p][1] += 1
            counts[g][2] += 1
    return build_report({k: tuple(v) for k, v in counts.items()}, exclude_labels)


def ner_metrics(
    gold: list[list[str]], pred: list[list[str]], exclude_o: bool = False
) -> MetricsReport:
    """Token-level scores over the 15 IOB tags.

    O is always reported as a class; with ``exclude_o`` it is left out of the
    macro/weighted averages only.
    """
    if len(gold) != len(pred):
        raise ValueError(f"{len(gold)} gold sequences vs {len(pred)} predicted")
    flat_gold, flat_pred = [], []
    for i, (g, p) in enumerate(zip(gold, pred)):
        if len(g) != len(p):
            raise ValueError(f"sequence {i}: length {len(g)} vs {len(p)}")
        flat_gold.extend(g)
        flat_pred.extend(p)
    exclude = frozenset({"O"}) if exclude_o else frozenset()
    return classification_report(flat_gold, flat_pred, list(IOB_TAGS), exclude)


def aggregate_cv(reports: list[MetricsReport]) -> MetricsReport:
    """Average reports across folds: scores are unweighted fold means,
    counts/supports are summed."""
    if not reports:
        raise ValueError("no reports to aggregate")
    class_sets = [tuple(r.classes.keys()) for r in reports]
    if any(cs != class_sets[0] for cs in class_sets):
        raise ValueError("fold reports have mismatched class sets")
    n = len(reports)
    classes = {}
    for label in class_sets[0]:
        folds = [r.classes[label] for r in reports]
        classes[label] = ClassScores(
            label,
            tp=sum(c.tp for c in folds),
            fp=sum(c.fp for c in folds),
            fn=sum(c.fn for c in folds),
            precision=sum(c.precision for c in folds) / n,
            recall=sum(c.recall for c in folds) / n,
            f1=sum(c.f1 for c in folds) / n,
        )

    def mean_avg(pick) -> Averages:
        return Averages(
            sum(pick(r).precision for r in reports) / n,
            sum(pick(r).recall for r in reports) / n,
            sum(pick(r).f1 for r in reports) / n,
        )

    return MetricsReport(
        classes,
        mean_avg(lambda r: r.micro),
        mean_avg(lambda r: r.macro),
        mean_avg(lambda r: r.weighted),
    )


def format_report(report: MetricsReport) -> str:
    rows = [("label", "precision", "recall", "f1", "support")]
    for label, c in report.classes.items():
        rows.append((label, f"{c.precision:.4f}", f"{c.recall:.4f}",
                     f"{c.f1:.4f}", str(c.support)))
    for name, avg in (("micro", report.micro), ("macro", report.macro),
                      ("weighted", report.weighted)):
        rows.append((name, f"{avg.precision:.4f}", f"{avg.recall:.4f}",
                     f"{avg.f1:.4f}", ""))
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.rjust(w) if j else cell.ljust(w)
                               for j, (cell, w) in enumerate(zip(row, widths))).rstrip())
        if i == 0 or i == len(rows) - 4:
            lines.append("-" * (sum(widths) + 8))
    return "\n".join(lines)


def report_to_json(report: MetricsReport) -> str:
    return json.dumps(
        {
            "classes": {
                label: {
                    "tp": c.tp, "fp": c.fp, "fn": c.fn,
                    "precision": c.precision, "recall": c.recall, "f1": c.f1,
                    "support": c.support,
                }
                for label, c in report.classes.items()
            },
            "micro": vars(report.micro),
            "macro": vars(report.macro),
            "weighted": vars(report.weighted),
        },
        indent=2,
        sort_keys=True,
    )


def report_to_csv(report: MetricsReport) -> str:
    lines = ["label,precision,recall,f1,support"]
    for label, c in report.classes.items():
        lines.append(f"{label},{c.precision},{c.recall},{c.f1},{c.support}")
    for name, avg in (("micro", report.micro), ("macro", report.macro),
                      ("weighted", report.weighted)):
        lines.append(f"{name},{avg.precision},{avg.recall},{avg.f1},")
    return "\n".join(lines) + "\n"


# --- pipeline scoring ------------------------------------------------------


@dataclass(frozen=True)
class DocScore:
    name: str
    words: int
    gold: int
    predicted: int
    correct: int

    @property
    def precision(self) -> float:
        return self.correct / self.predicted if self.predicted else 0.0

    @property
    def recall(self) -> float:
        return self.correct / self.gold if self.gold else 0.0

    @property
    def f1(self) -> float:
        return f1_score(self.precision, self.recall)


@dataclass(frozen=True)
class PipelineScore:
    elements: tuple[DocScore, ...]
    relations: tuple[DocScore, ...]

    @staticmethod
    def _total(rows: tuple[DocScore, ...]) -> DocScore:
        return DocScore(
            "Total",
            sum(r.words for r in rows),
            sum(r.gold for r in rows),
            sum(r.predicted for r in rows),
            sum(r.correct for r in rows),
        )

    @property
    def elements_total(self) -> DocScore:
        return self._total(self.elements)

    @property
    def relations_total(self) -> DocScore:
        return self._total(self.relations)

    @staticmethod
    def from_counts(
        elements: list[tuple[str, int, int, int, int]],
        relations: list[tuple[str, int, int, int, int]],
    ) -> "PipelineScore":
        """Build a score table directly from (name, words, gold, predicted,
        correct) integer rows, e.g. published evaluation counts."""
        return PipelineScore(
            tuple(DocScore(*row) for row in elements),
            tuple(DocScore(*row) for row in relations),
        )


def _match_mentions(
    gold: list[Mention], pred: list[Mention], relaxed: bool
) -> dict[int, int]:
    """Map predicted mention ids to matched gold mention ids.

    Exact mode requires identical (type, sentence, span).  Relaxed mode
    matches overlapping same-type spans; since spans on each side are
    disjoint, greedy earliest-end matching per sentence and type is a maximum
    matching, making the correct count symmetric in gold/pred.
    """
    mapping: dict[int, int] = {}
    if not relaxed:
        index = {(m.type, m.sentence_id, m.token_start, m.token_end): m.mention_id
                 for m in gold}
        for m in pred:
            gid = index.get((m.type, m.sentence_id, m.token_start, m.token_end))
            if gid is not None:
                mapping[m.mention_id] = gid
        return mapping
    by_key_gold: dict[tuple, list[Mention]] = {}
    for m in gold:
        by_key_gold.setdefault((m.type, m.sentence_id), []).append(m)
    by_key_pred: dict[tuple, list[Mention]] = {}
    for m in pred:
        by_key_pred.setdefault((m.type, m.sentence_id), []).append(m)
    for key, golds in by_key_gold.items():
        preds = by_key_pred.get(key, [])
        golds = sorted(golds, key=lambda m: (m.token_end, m.token_start))
        preds = sorted(preds, key=lambda m: (m.token_end, m.token_start))
        gi = 0
        for p in preds:
            while gi < len(golds) and golds[gi].token_end < p.token_start:
                gi += 1
            if gi < len(golds) and golds[gi].token_start <= p.token_end:
                mapping[p.mention_id] = golds[gi].mention_id
                gi += 1
    return mapping


def pipeline_metrics(
    pairs: list[tuple[Document, list[Mention], list[Relation]]],
    relaxed_spans: bool = False,
) -> PipelineScore:
    """Score extracted mentions and relations against gold documents.

    An element is correct iff its type and token span match a gold mention
    (overlap suffices in relaxed mode); a relation is correct iff its type
    matches and both endpoints map onto the endpoints of a gold relation.
    Totals are micro-style sums over documents.
    """
    element_rows, relation_rows = [], []
    for doc, pred_mentions, pred_relations in pairs:
        mapping = _match_mentions(list(doc.mentions), pred_mentions, relaxed_spans)
        element_rows.append(
            DocScore(doc.name, len(doc.tokens), len(doc.mentions),
                     len(pred_mentions), len(mapping))
        )
        gold_rel = {(r.source, r.target, r.type) for r in doc.relations}
        correct = 0
        for r in pred_relations:
            src = mapping.get(r.source)
            tgt = mapping.get(r.target)
            if src is not None and tgt is not None and (src, tgt, r.type) in gold_rel:
                gold_rel.remove((src, tgt, r.type))
                correct += 1
        relation_rows.append(
            DocScore(doc.name, len(doc.tokens), len(doc.relations),
                     len(pred_relations), correct)
        )
    return PipelineScore(tuple(element_rows), tuple(relation_rows))


def percent(x: float) -> str:
    """Format a fraction as a percentage with one half-up decimal."""
    return str((Decimal(repr(x)) * 100).quantize(Decimal("0.1"), ROUND_HALF_UP)) + "%"


def pipeline_to_csv(score: PipelineScore) -> str:
    lines = ["section,document,words,gold,predicted,correct,precision,recall,f1"]
    for section, rows in (("elements", score.elements),
                          ("relations", score.relations)):
        total = PipelineScore._total(rows)
        for r in list(rows) + [total]:
            lines.append(
                f"{section},{r.name},{r.words},{r.gold},{r.predicted},"
                f"{r.correct},{r.precision},{r.recall},{r.f1}"
            )
    return "\n".join(lines) + "\n"


def format_pipeline_table(score: PipelineScore) -> str:
    def section(title, rows):
        total = PipelineScore._total(rows)
        out = [f"== {title} =="]
        header = ("document", "#Words", "#Gold", "#Pred", "#Correct",
                  "Precision", "Recall", "F1")
        table = [header]
        for r in list(rows) + [total]:
            table.append((r.name, str(r.words), str(r.gold), str(r.predicted),
                          str(r.correct), percent(r.precision), percent(r.recall),
                          percent(r.f1)))
        widths = [max(len(row[i]) for row in table) for i in range(len(header))]
        for i, row in enumerate(table):
            out.append("  ".join(c.rjust(w) if j else c.ljust(w)
                                 for j, (c, w) in enumerate(zip(row, widths))).rstrip())
            if i in (0, len(table) - 2):
                out.append("-" * (sum(widths) + 14))
        return out

    lines = section("Elements", score.elements)
    lines.append("")
    lines.extend(section("Relations", score.relations))
    return "\n".join(lines)
