from __future__ import annotations

from segcomplex.cli import run

if __name__ == "__main__":  # pragma: no cover - manual invocation helper
    run()
