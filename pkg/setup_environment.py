#!/usr/bin/env python3
"""
Environment Setup Script for the learner-agnostic prefiltering simulator.
Run this script to write a .env file and a default experiment config.
"""

import os
import subprocess
import sys
from typing import Optional


def print_header():
    """Print setup header."""
    print("=" * 60)
    print("📐 Learner-Agnostic Prefiltering Simulator Setup")
    print("=" * 60)
    print()


def check_python_version():
    """Check Python version compatibility."""
    print("📋 Checking Python version...")
    if sys.version_info < (3, 9):
        print("❌ Python 3.9+ is required")
        sys.exit(1)
    print(f"✅ Python {sys.version_info.major}.{sys.version_info.minor} is compatible")
    print()


def install_dependencies() -> bool:
    """Install required Python packages."""
    print("📋 Installing Python dependencies...")
    try:
        subprocess.run([sys.executable, "-m", "pip", "install", "-r", "requirements.txt"],
                       check=True, capture_output=True)
        print("✅ Dependencies installed successfully")
    except subprocess.CalledProcessError as e:
        print(f"❌ Failed to install dependencies: {e}")
        return False
    except FileNotFoundError:
        print("❌ requirements.txt not found")
        return False
    print()
    return True


def create_env_file(path: str = ".env", seed: Optional[int] = None, workers: Optional[int] = None,
                    output_dir: str = "./output") -> str:
    """
    Create the .env file with the simulator variables.

    An existing file is moved to <path>.backup first.

    Returns:
        str: The path written
    """
    print(f"📋 Creating {path}...")

    if os.path.exists(path):
        print(f"⚠️  {path} already exists. Backing up to {path}.backup")
        os.replace(path, f"{path}.backup")

    seed = 20240607 if seed is None else seed
    workers = workers or os.cpu_count() or 1

    env_content = f"""# Reproducibility
LARP_SEED={seed}

# Execution
LARP_WORKERS={workers}
LARP_OUTPUT_DIR={output_dir}

# Development Settings
DEBUG=False
LOG_LEVEL=INFO
"""

    with open(path, "w") as f:
        f.write(env_content)

    print(f"✅ Created {path} with seed {seed} and {workers} workers")
    print()
    return path


def write_default_experiment_config(path: str = "experiment.json") -> dict:
    """Write the standard epsilon-sweep protocol as an editable JSON config."""
    from tools.sweep_tool import default_experiment_config
    from utils.storage_utils import OutputManager

    print(f"📋 Writing default experiment config to {path}...")
    result = OutputManager(".").write_json(path, default_experiment_config().to_dict())
    if result["status"] == "success":
        print(f"✅ Wrote {result['path']}")
    else:
        print(f"❌ Could not write {path}: {result['error']}")
    print()
    return result


def check_pipeline() -> bool:
    """Validate settings and the worker pool configuration."""
    from pipeline.runner import validate_pipeline

    print("📋 Validating pipeline settings...")
    validation = validate_pipeline()
    if validation["is_valid"]:
        print(f"✅ Pipeline OK ({validation['workers']} workers)")
    else:
        for issue in validation["issues"]:
            print(f"❌ {issue}")
    print()
    return validation["is_valid"]


def main():
    """Main setup function."""
    print_header()

    check_python_version()

    if not install_dependencies():
        print("❌ Setup failed during dependency installation")
        sys.exit(1)

    create_env_file()
    write_default_experiment_config()
    check_pipeline()

    print("🎯 Next steps:")
    print("1. Edit experiment.json or .env to change the protocol")
    print()
    print("2. Run the epsilon sweep:")
    print("   python -m cli mean-exp --config experiment.json")
    print()
    print("3. Run the fast test suite:")
    print("   pytest -m 'not slow'")
    print()
    print("✅ Setup completed!")


if __name__ == "__main__":
    main()
