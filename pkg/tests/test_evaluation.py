"""The not-working loop, threshold semantics, and baseline ranking."""

import json

import pytest

from varsel.evaluation import (
    ACCEPTED,
    EXHAUSTED,
    NOT_WORKING,
    EmptyChainError,
    MetricsReport,
    WorkingCriterion,
    WrongTechniqueError,
    compare_baselines,
    load_baselines,
    load_report,
    new_session,
    packaged_baselines,
    packaged_reference_report,
    parse_criterion,
    submit_metrics,
)
from varsel.recommend import RecommendationChain, heart_failure_assumptions, recommend


def report(technique, f1, mcc=0.5, bacc=0.7, sens=0.7, spec=0.7, provenance="test"):
    return MetricsReport(technique, f1, mcc, bacc, sens, spec, provenance)


@pytest.fixture()
def chain(kb):
    return recommend(kb, heart_failure_assumptions())


def test_new_session_starts_at_head(chain):
    session = new_session(chain, parse_criterion("f1:0.77"))
    assert session.current_candidates() == ("LinearSVC",)
    assert session.cursor == 0
    assert session.history == []


def test_empty_chain_rejected():
    with pytest.raises(EmptyChainError):
        new_session(RecommendationChain("Classification", ()), parse_criterion("f1:0.77"))


def test_mcc_criterion_constructs():
    criterion = WorkingCriterion("mcc", 0.6)
    assert criterion.passes(report("X", 0.1, mcc=0.6))
    with pytest.raises(ValueError):
        WorkingCriterion("mcc", 1.5)
    with pytest.raises(ValueError):
        WorkingCriterion("f1", -0.1)
    with pytest.raises(ValueError):
        parse_criterion("f1=0.5")


def test_reference_report_accepted(kb, chain):
    session = new_session(chain, parse_criterion("f1:0.77"))
    decision = submit_metrics(session, packaged_reference_report())
    assert decision.status == ACCEPTED
    assert decision.technique == "LinearSVC"
    assert session.history[0][1] is decision


def test_failing_head_moves_to_next_step(chain):
    session = new_session(chain, parse_criterion("f1:0.77"))
    decision = submit_metrics(session, report("LinearSVC", 0.600))
    assert decision.status == NOT_WORKING
    assert decision.candidates == ("KNeighborsClassifier",)
    assert session.cursor == 1


def test_threshold_is_inclusive(chain):
    session = new_session(chain, parse_criterion("f1:0.77"))
    decision = submit_metrics(session, report("LinearSVC", 0.77))
    assert decision.status == ACCEPTED


def test_wrong_technique_rejected(chain):
    session = new_session(chain, parse_criterion("f1:0.77"))
    with pytest.raises(WrongTechniqueError):
        submit_metrics(session, report("SVC", 0.9))
    assert session.history == []


def test_alternatives_tried_in_any_order_until_all_fail(chain):
    session = new_session(chain, parse_criterion("f1:0.77"))
    submit_metrics(session, report("LinearSVC", 0.5))
    submit_metrics(session, report("KNeighborsClassifier", 0.5))
    # Now at the disjunctive step {SVC, EnsembleClassifiers}.
    decision = submit_metrics(session, report("EnsembleClassifiers", 0.5))
    assert decision.status == NOT_WORKING
    assert decision.candidates == ("SVC",)
    assert session.cursor == 2  # step not exhausted yet
    decision = submit_metrics(session, report("SVC", 0.5))
    assert decision.status == EXHAUSTED
    assert session.current_candidates() == ()


def test_exhausted_after_all_steps(chain):
    session = new_session(chain, parse_criterion("f1:0.77"))
    for technique in ("LinearSVC", "KNeighborsClassifier", "SVC", "EnsembleClassifiers"):
        decision = submit_metrics(session, report(technique, 0.1))
    assert decision.status == EXHAUSTED
    with pytest.raises(WrongTechniqueError):
        submit_metrics(session, report("SVC", 0.9))


def test_accepting_closes_the_session(chain):
    session = new_session(chain, parse_criterion("f1:0.0"))
    submit_metrics(session, report("LinearSVC", 0.5))
    with pytest.raises(WrongTechniqueError):
        submit_metrics(session, report("LinearSVC", 0.9))


def test_cursor_monotone_history_append_only(chain):
    session = new_session(chain, parse_criterion("f1:0.77"))
    cursors = [session.cursor]
    for technique, f1 in (
        ("LinearSVC", 0.3),
        ("KNeighborsClassifier", 0.3),
        ("SVC", 0.3),
        ("EnsembleClassifiers", 0.9),
    ):
        submit_metrics(session, report(technique, f1))
        cursors.append(session.cursor)
    assert cursors == sorted(cursors)
    assert len(session.history) == 4


def test_replay_is_deterministic(chain):
    reports = [report("LinearSVC", 0.6), report("KNeighborsClassifier", 0.78)]
    outcomes = []
    for _ in range(2):
        session = new_session(chain, parse_criterion("f1:0.77"))
        outcomes.append([submit_metrics(session, r) for r in reports])
    assert outcomes[0] == outcomes[1]


# ---------------------------------------------------------------------------
# baselines


def test_reference_beats_published_baselines():
    ours = packaged_reference_report()
    ranking = compare_baselines(ours, packaged_baselines())
    assert ranking.submitted_rank == 1
    assert [row.report.technique for row in ranking.rows] == [
        "LinearSVC",
        "RandomForest",
        "LogisticRegression",
    ]
    deltas = {row.report.technique: row.delta_f1 for row in ranking.rows}
    assert deltas["LogisticRegression"] == pytest.approx(0.066)
    assert deltas["RandomForest"] == pytest.approx(0.034)
    assert deltas["LinearSVC"] == 0.0


def test_ties_preserve_input_order():
    a = report("A", 0.7)
    twin_b = report("B", 0.7)
    twin_c = report("C", 0.7)
    ranking = compare_baselines(a, [twin_b, twin_c])
    assert [row.report.technique for row in ranking.rows] == ["A", "B", "C"]


def test_single_entry_ranking():
    ranking = compare_baselines(report("A", 0.5), [])
    assert ranking.submitted_rank == 1
    assert len(ranking.rows) == 1


def test_ranking_is_permutation_of_inputs():
    ours = report("A", 0.4)
    baselines = [report("B", 0.9), report("C", 0.1), report("D", 0.4, mcc=0.9)]
    ranking = compare_baselines(ours, baselines)
    assert sorted(r.report.technique for r in ranking.rows) == ["A", "B", "C", "D"]
    assert [r.rank for r in ranking.rows] == [1, 2, 3, 4]
    # D ties A on f1 but wins on mcc.
    assert [r.report.technique for r in ranking.rows] == ["B", "D", "A", "C"]


def test_report_file_round_trip(tmp_path):
    ours = packaged_reference_report()
    path = tmp_path / "report.json"
    path.write_text(json.dumps(ours.as_dict()), encoding="utf-8")
    assert load_report(path) == ours


def test_baselines_fixture_matches_published_numbers(tmp_path):
    rows = packaged_baselines()
    by_technique = {r.technique: r for r in rows}
    lr = by_technique["LogisticRegression"]
    assert (lr.f1, lr.mcc, lr.bacc, lr.sensitivity, lr.specificity) == (0.714, 0.607, 0.818, 0.78, 0.856)
    rf = by_technique["RandomForest"]
    assert (rf.f1, rf.mcc, rf.bacc, rf.sensitivity, rf.specificity) == (0.746, 0.619, 0.813, 0.813, 0.823)
    path = tmp_path / "baselines.json"
    path.write_text(json.dumps([r.as_dict() for r in rows]), encoding="utf-8")
    assert load_baselines(path) == rows


def test_report_range_validation():
    with pytest.raises(ValueError):
        report("X", 1.2)
    with pytest.raises(ValueError):
        MetricsReport("X", 0.5, -1.5, 0.5, 0.5, 0.5)
