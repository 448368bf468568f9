"""Phase E style evaluation: the not-working loop and baseline ranking.

Walks the heart-failure chain under the F1 >= 0.77 criterion twice: once
with the published reference metrics (accepted at the first step), once
with deliberately failing reports to show fallback and exhaustion. Ends by
ranking the reference report against the published baselines.

Run: python3 demos/03_evaluation_loop.py
"""

from varsel import (
    MetricsReport,
    compare_baselines,
    heart_failure_assumptions,
    load_knowledge_base,
    new_session,
    packaged_baselines,
    packaged_reference_report,
    parse_criterion,
    recommend,
    submit_metrics,
)


def main():
    kb = load_knowledge_base()
    chain = recommend(kb, heart_failure_assumptions())
    criterion = parse_criterion("f1:0.77")

    print("chain:", "  ->  ".join(" | ".join(step) for step in chain.steps))
    print("criterion:", criterion)

    session = new_session(chain, criterion)
    decision = submit_metrics(session, packaged_reference_report())
    print("\nreference metrics submitted:", decision.status, decision.technique)

    print("\nnow a run where everything fails:")
    session = new_session(chain, criterion)
    for technique in ("LinearSVC", "KNeighborsClassifier", "SVC", "EnsembleClassifiers"):
        failing = MetricsReport(technique, 0.5, 0.1, 0.55, 0.5, 0.6, "demo: failing run")
        decision = submit_metrics(session, failing)
        nxt = " | ".join(decision.candidates) if decision.candidates else "-"
        print(f"  {technique:22} -> {decision.status:12} next: {nxt}")

    print("\nranking against published baselines:")
    ranking = compare_baselines(packaged_reference_report(), packaged_baselines())
    for row in ranking.rows:
        marker = "(submitted)" if row.submitted else f"(delta {row.delta_f1:+.3f})"
        print(f"  {row.rank}. {row.report.technique:20} f1={row.report.f1:.3f} {marker}")


if __name__ == "__main__":
    main()
