import json
import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from smcselect.model import ExperimentConfig


def generate_schema():
    output_dir = project_root / "schemas"
    output_dir.mkdir(parents=True, exist_ok=True)

    # Experiment files are single YAML objects keyed by camelCase aliases
    try:
        schema = ExperimentConfig.model_json_schema(by_alias=True)
        with open(output_dir / "experiment.schema.json", "w") as f:
            json.dump(schema, f, indent=2)
            f.write("\n")
        print(f"Generated {output_dir / 'experiment.schema.json'}")
    except Exception as e:
        print(f"Error generating ExperimentConfig schema: {e}")
        sys.exit(1)


if __name__ == "__main__":
    generate_schema()
