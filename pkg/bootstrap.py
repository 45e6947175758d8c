#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Bootstrap script for the mtc-coset project.
Installs the package in editable mode, prepares config.env and checks the
installation against the Ising coset fixture.
"""

import shutil
import subprocess
import sys
from pathlib import Path


def check_python_version():
    """Check if Python version is compatible."""
    if sys.version_info < (3, 10):
        print("❌ Python 3.10 or higher is required.")
        print(f"   Current version: {sys.version}")
        return False
    print(f"✅ Python version: {sys.version.split()[0]}")
    return True


def install_package():
    """Install mtc-coset with its development extras."""
    print("\n📦 Installing mtc-coset...")
    try:
        subprocess.check_call([sys.executable, "-m", "pip", "install", "-e", ".[dev]"])
        print("✅ Package installed successfully")
        return True
    except subprocess.CalledProcessError as e:
        print(f"❌ Failed to install package: {e}")
        return False


def setup_config():
    """Create config.env from the example if it does not exist yet."""
    config_example = Path("config.env.example")
    config_file = Path("config.env")

    print("\n⚙️ Setting up configuration...")

    if config_file.exists():
        print("✅ config.env already exists")
        return True

    if not config_example.exists():
        print("❌ config.env.example not found")
        return False

    shutil.copyfile(config_example, config_file)
    print("✅ Created config.env from template (defaults need no edits)")
    return True


def create_directories():
    """Create necessary directories."""
    print("\n📁 Creating directories...")

    for directory in ["logs", "reports"]:
        Path(directory).mkdir(exist_ok=True)
        print(f"✅ Created directory: {directory}")

    return True


def run_smoke_check():
    """Analyze the Ising coset fixture through the CLI."""
    print("\n🧪 Running smoke check...")
    fixture = Path("reports") / "ising.json"
    commands = [
        [sys.executable, "-m", "mtc_coset", "coset", "fixture", "ising", "-o", str(fixture)],
        [sys.executable, "-m", "mtc_coset", "coset", "analyze", str(fixture),
         "--report", str(Path("reports") / "ising.md")],
    ]
    for cmd in commands:
        result = subprocess.run(cmd, capture_output=True, text=True)
        if result.returncode != 0:
            print(f"❌ Command failed ({result.returncode}): {' '.join(cmd)}")
            print(result.stdout)
            print(result.stderr)
            return False
    print("✅ Ising coset analysis passed")
    return True


def print_next_steps():
    """Print information about next steps."""
    print("\n" + "=" * 60)
    print("🎉 SETUP COMPLETE!")
    print("=" * 60)
    print("\n📋 Next Steps:")
    print("1. Generate modular data:")
    print("   mtc-coset generate su2 --level 3 -o data/su2_3.json")
    print("2. Validate it:")
    print("   mtc-coset validate data/su2_3.json")
    print("3. Analyze a coset system:")
    print("   mtc-coset coset fixture diagonal --level 2 -o data/diag2.json")
    print("   mtc-coset coset analyze data/diag2.json --report reports/diag2.md")
    print("4. Run the test suite:")
    print("   pytest")
    print("\n📚 Documentation: README.md and docs/")


def main():
    """Main setup function."""
    print("⚡ mtc-coset Setup")
    print("=" * 40)

    if not check_python_version():
        sys.exit(1)

    steps = [install_package, setup_config, create_directories, run_smoke_check]

    for step in steps:
        if not step():
            print(f"\n❌ Setup failed at: {step.__name__}")
            sys.exit(1)

    print_next_steps()


if __name__ == "__main__":
    main()
