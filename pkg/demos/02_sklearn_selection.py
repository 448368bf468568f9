"""Technique selection for the heart-failure study.

Loads the scikit-learn knowledge base, runs its self check, and derives a
recommendation chain with a rule-by-rule justification trace for the
299-patient heart-failure dataset.

Run: python3 demos/02_sklearn_selection.py
"""

from varsel import (
    heart_failure_assumptions,
    load_knowledge_base,
    recommend,
    self_check,
)


def main():
    kb = load_knowledge_base()
    report = self_check(kb)
    print("knowledge base self check:", "ok" if report.ok else report.failures)
    for note in report.notes:
        print("  note:", note)

    print("\nclassification techniques:", ", ".join(kb.techniques("Classification")))

    assumptions = heart_failure_assumptions()
    print(f"\nassumptions: {assumptions.sample_size} rows, {assumptions.num_features} features, "
          f"predict={assumptions.prediction}, labeled={assumptions.labeled}")

    chain = recommend(kb, assumptions)
    print("category:", chain.category)
    print("chain:", "  ->  ".join(" | ".join(step) for step in chain.steps))
    print("\njustification trace:")
    for entry in chain.trace:
        print(f"  {entry.label:6} {str(entry.value).lower():6} {entry.formula}")


if __name__ == "__main__":
    main()
