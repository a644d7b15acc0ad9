"""Published evaluation scores for the eleven fine-tuning configurations.

Per configuration: four (base model, test set) column groups in the order
(Top5, 2010), (Top5, 2011), (Top6, 2010), (Top6, 2011), each holding
(BLEU, TER, chrF2).
"""

from subvoc.significance import ScoreRecord

PUBLISHED_SCORES = {
    "C1":  [(36.1, 52.4, 60.3), (43.7, 44.1, 66.1), (36.4, 52.3, 60.4), (44.1, 43.7, 66.4)],
    "C2":  [(35.9, 52.5, 60.0), (42.8, 44.9, 65.2), (36.1, 52.5, 60.0), (44.0, 43.7, 65.8)],
    "C3":  [(36.1, 52.4, 60.4), (44.0, 43.6, 66.6), (36.4, 52.2, 60.4), (44.4, 43.5, 66.4)],
    "C4":  [(35.5, 52.8, 59.7), (43.3, 44.5, 65.6), (35.5, 53.0, 59.6), (43.6, 44.1, 65.7)],
    "C5":  [(33.4, 53.8, 58.6), (40.7, 45.4, 64.2), (33.6, 53.3, 58.7), (40.9, 45.5, 64.2)],
    "C6":  [(35.4, 53.0, 59.7), (43.5, 44.6, 65.5), (35.5, 53.6, 59.9), (43.3, 44.4, 65.7)],
    "C7":  [(33.4, 53.3, 58.6), (40.9, 45.1, 64.2), (33.2, 53.4, 58.2), (40.2, 45.4, 64.0)],
    "C8":  [(35.4, 52.8, 59.6), (42.8, 44.6, 65.1), (35.1, 53.1, 59.6), (43.3, 44.4, 65.7)],
    "C9":  [(36.1, 52.4, 60.1), (44.0, 43.6, 66.4), (35.9, 52.6, 60.4), (44.3, 43.5, 66.6)],
    "C10": [(35.6, 52.7, 59.9), (43.0, 44.9, 65.2), (36.1, 52.3, 60.2), (44.0, 43.6, 66.0)],
    "C11": [(36.0, 52.5, 60.1), (44.1, 43.6, 65.9), (36.4, 52.3, 60.3), (44.0, 43.8, 66.4)],
}

PUBLISHED_ORDER = ["C3", "C1", "C9", "C11", "C2", "C10", "C4", "C8", "C6", "C7", "C5"]

COLUMN_GROUPS = [("top5", "test2010"), ("top5", "test2011"), ("top6", "test2010"), ("top6", "test2011")]


def published_score_records() -> list[ScoreRecord]:
    """One record per (config, base model, test set, metric).

    Both base models contribute records for the same test set, so ranking
    averages them into one (test set, metric) cell per configuration.
    """
    records = []
    for label, groups in PUBLISHED_SCORES.items():
        for (_, test_set), (bleu_v, ter_v, chrf_v) in zip(COLUMN_GROUPS, groups):
            records.append(ScoreRecord(label, test_set, "bleu", bleu_v))
            records.append(ScoreRecord(label, test_set, "ter", ter_v))
            records.append(ScoreRecord(label, test_set, "chrf2", chrf_v))
    return records
