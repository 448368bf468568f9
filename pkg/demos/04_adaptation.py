"""Reconfiguration when assumptions change.

Two what-if scenarios on the heart-failure study: the dataset grows past
100K rows (the chain head switches to the SGD classifier), and the goal
changes from predicting survival to predicting days until death (the
selection moves to regression).

Run: python3 demos/04_adaptation.py
"""

from varsel import (
    AssumptionDelta,
    FieldChange,
    heart_failure_assumptions,
    load_knowledge_base,
    reselect,
)


def describe(outcome):
    if hasattr(outcome, "steps"):
        return outcome.category + ": " + "  ->  ".join(" | ".join(step) for step in outcome.steps)
    return f"no recommendation ({outcome.reason})"


def main():
    kb = load_knowledge_base()
    case_study = heart_failure_assumptions()

    print("scenario 1: sample grows from 299 to 150000 rows")
    growth = AssumptionDelta((FieldChange("sample_size", 299, 150000),))
    report = reselect(kb, case_study, growth)
    print("  old:", describe(report.old_chain))
    print("  new:", describe(report.new_chain))
    print("  rules that flipped:", ", ".join(report.changed_constraints))
    print("  selected:", ", ".join(report.feature_diff.selected))
    print("  deselected:", ", ".join(report.feature_diff.deselected))

    print("\nscenario 2: predict how many days instead of whether")
    regoal = AssumptionDelta((FieldChange("prediction", "category", "quantity"),))
    report = reselect(kb, case_study, regoal)
    print("  old:", describe(report.old_chain))
    print("  new:", describe(report.new_chain))
    print("  selected:", ", ".join(report.feature_diff.selected))
    print("  deselected:", ", ".join(report.feature_diff.deselected))


if __name__ == "__main__":
    main()
