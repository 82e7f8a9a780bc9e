#!/usr/bin/env python3
"""
Scan store setup script
Creates the scan tables and prints what is already stored
"""

import sys

from sqlalchemy import inspect

from config import Config
from models.scan_repository import LemmaArtifactRepository, ScanRepository
from models.sqlalchemy_models import Base, DatabaseEngine


def setup_scan_store(database_url: str = None) -> bool:
    """Create the scan tables (idempotent) and report their contents"""
    database_url = database_url or Config.DATABASE_URL

    print("🚀 Setting up the scan store")
    print("=" * 60)

    try:
        engine = DatabaseEngine(database_url)
        engine.create_tables()
        print(f"✅ Connected to {database_url}")

        existing = set(inspect(engine.engine).get_table_names())
        for table in Base.metadata.tables:
            mark = "✅" if table in existing else "❌"
            print(f"   {mark} {table}")

        runs = ScanRepository(engine).list_runs()
        artifacts = LemmaArtifactRepository(engine).list_artifacts()
        minimums = ScanRepository(engine).minimum_by_order()

        print()
        print("📈 Stored results:")
        print(f"   🔎 Scan runs: {len(runs)}")
        print(f"   🧩 Covered-subset gaps: {len(artifacts)}")
        for n, m in sorted(minimums.items()):
            print(f"   n={n}: smallest observed maximum {m}")

        print()
        print("📋 Next Steps:")
        print("  1. Scan: mlt scan --n 4 --all --store")
        print("  2. Review: mlt runs")
        print("  3. Serve: mlt serve")
        return True

    except Exception as e:
        print(f"❌ Setup failed: {e}")
        return False


if __name__ == "__main__":
    success = setup_scan_store(sys.argv[1] if len(sys.argv) > 1 else None)
    sys.exit(0 if success else 1)
