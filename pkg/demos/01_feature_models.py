"""Feature models from scratch: validity, enumeration, and propagation.

Builds the classic car example, checks configurations against the tree
rules and a cross-tree constraint, lists every valid configuration, and
asks the propagator what one choice forces.

Run: python3 demos/01_feature_models.py
"""

from varsel import (
    Configuration,
    PartialConfiguration,
    enumerate_configurations,
    is_valid_configuration,
    parse_model,
    propagate,
    serialize_model,
)

CAR = """
model CarExample
root Car {
  mandatory Body
  mandatory Engine {
    xor {
      optional Electric
      optional Petrol
      optional Gas
    }
  }
  optional MusicPlayer
  optional Camera
  optional ElectricWindowOpener
}
# an electric window opener needs an electric car
constraint R1 : ElectricWindowOpener implies Electric
"""


def main():
    model = parse_model(CAR)
    print("parsed + canonical form:")
    print(serialize_model(model))

    good = Configuration(frozenset({"Car", "Body", "Engine", "Electric", "MusicPlayer"}))
    bad = Configuration(frozenset({"Car", "Body", "Engine", "Petrol", "ElectricWindowOpener"}))
    print("valid config accepted:", is_valid_configuration(model, good).valid)
    verdict = is_valid_configuration(model, bad)
    print("invalid config rejected:", [str(v) for v in verdict.violations])

    configs = enumerate_configurations(model, {})
    print(f"\nall {len(configs)} valid configurations:")
    for config in configs[:8]:
        print("  ", sorted(config.selected))
    if len(configs) > 8:
        print(f"   ... {len(configs) - 8} more")

    result = propagate(model, PartialConfiguration(selected=frozenset({"ElectricWindowOpener"})))
    print("\nselecting ElectricWindowOpener forces:")
    print("  selected:", sorted(result.forced_selected))
    print("  excluded:", sorted(result.forced_excluded))


if __name__ == "__main__":
    main()
