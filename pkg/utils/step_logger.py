"""
Step-by-step run logging for the chebdyn CLI.

Each CLI run that has logging enabled gets its own directory:

    <log_dir>/<subject>/<timestamp>/
        step_01_<name>/input.json, output.json, metadata.json, summary.md
        ...
        final_output/final.json, summary.md

Only active when CHEBDYN_STEP_LOGGING=true in the environment (or when
``enabled=True`` is passed). Failures to write are reported and ignored.
"""

import json
import os
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional


class StepLogger:
    """
    Logger for the steps of one CLI run (an analysis, a render, a verify suite).

    Creates one directory per step with:
    - input.json, output.json
    - metadata.json (step name, elapsed seconds, timestamp, caller metadata)
    - summary.md
    """

    def __init__(self, subject: str, enabled: Optional[bool] = None, log_dir: Optional[str] = None):
        """
        Initialize the step logger for one run.

        Args:
            subject: Short run label, e.g. "verify" or "render_n4"
            enabled: Override enable check (default: read CHEBDYN_STEP_LOGGING)
            log_dir: Root directory (default: CHEBDYN_LOG_DIR or "Logs")
        """
        if enabled is None:
            enabled = os.getenv('CHEBDYN_STEP_LOGGING', 'false').lower() == 'true'

        self.enabled = enabled
        self.subject = subject
        self.log_dir = Path(log_dir or os.getenv('CHEBDYN_LOG_DIR', 'Logs'))
        self.base_dir: Optional[Path] = None
        self.current_step_dir: Optional[Path] = None
        self.current_step_name: Optional[str] = None
        self.step_counter = 0
        self.step_start_time: Optional[float] = None

        if self.enabled:
            self._setup_directories()

    def _setup_directories(self):
        """Create the base logging directory."""
        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S_%f')
        self.base_dir = self.log_dir / self.subject / timestamp
        try:
            self.base_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            print(f"[WARN] Step logging disabled, cannot create {self.base_dir}: {e}", file=sys.stderr)
            self.enabled = False
            return
        print(f"[OK] Step logging enabled: {self.base_dir}", file=sys.stderr)

    def is_logging_enabled(self) -> bool:
        return self.enabled

    def log_step_start(self, step_name: str, input_data: Any = None):
        """
        Log the start of a step.

        Args:
            step_name: Name of the step (e.g. "claim_extraneous_n3", "render")
            input_data: JSON-serialisable parameters of this step
        """
        if not self.enabled:
            return

        self.step_counter += 1
        dir_name = f"step_{self.step_counter:02d}_{step_name}"
        self.current_step_dir = self.base_dir / dir_name
        try:
            self.current_step_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            print(f"[WARN] Could not create {dir_name}: {e}", file=sys.stderr)
            self.current_step_dir = None
            return
        self.current_step_name = step_name
        self.step_start_time = time.time()

        if input_data is not None:
            self._write_json(self.current_step_dir / 'input.json', input_data)

    def log_step_complete(self, output_data: Any, metadata: Optional[Dict[str, Any]] = None):
        """
        Log the completion of the current step.

        Args:
            output_data: JSON-serialisable result of the step
            metadata: Extra counts or verdicts to keep next to the timing
        """
        if not self.enabled or not self.current_step_dir:
            return

        elapsed = time.time() - self.step_start_time if self.step_start_time else 0

        self._write_json(self.current_step_dir / 'output.json', output_data)

        metadata = dict(metadata or {})
        metadata['step_name'] = self.current_step_name
        metadata['elapsed_seconds'] = round(elapsed, 3)
        metadata['timestamp'] = datetime.now().isoformat()
        self._write_json(self.current_step_dir / 'metadata.json', metadata)

        self._write_text(self.current_step_dir / 'summary.md', self._step_summary(metadata))

    def log_final_output(self, final_data: Any):
        """
        Log the final output of the run.

        Args:
            final_data: The document the CLI printed or wrote
        """
        if not self.enabled:
            return

        final_dir = self.base_dir / 'final_output'
        try:
            final_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            print(f"[WARN] Could not create final_output: {e}", file=sys.stderr)
            return

        self._write_json(final_dir / 'final.json', final_data)
        self._write_text(final_dir / 'summary.md', self._final_summary(final_data))
        print(f"[OK] Run log saved: {self.base_dir}", file=sys.stderr)

    def _write_json(self, filepath: Path, data: Any):
        """Write data to JSON file with pretty formatting."""
        try:
            with filepath.open('w', encoding='utf-8') as f:
                json.dump(data, f, indent=2, ensure_ascii=False, default=str)
        except (OSError, TypeError, ValueError) as e:
            print(f"[WARN] Could not write {filepath.name}: {e}", file=sys.stderr)

    def _write_text(self, filepath: Path, content: str):
        try:
            filepath.write_text(content, encoding='utf-8')
        except OSError as e:
            print(f"[WARN] Could not write {filepath.name}: {e}", file=sys.stderr)

    def _step_summary(self, metadata: Dict[str, Any]) -> str:
        lines = [
            f"# {self.current_step_name.replace('_', ' ').title()}",
            "",
            f"Completed in {metadata['elapsed_seconds']:.3f}s",
        ]
        extra = {k: v for k, v in metadata.items() if k not in ('step_name', 'elapsed_seconds', 'timestamp')}
        if extra:
            lines.extend(["", "## Details"])
            lines.extend(f"- {key}: {value}" for key, value in extra.items())
        return '\n'.join(lines) + '\n'

    def _final_summary(self, final_data: Any) -> str:
        lines = [
            f"# Run: {self.subject}",
            "",
            f"Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}",
            f"Steps: {self.step_counter}",
        ]
        # verify runs produce a list of claim reports
        if isinstance(final_data, list):
            verdicts: Dict[str, int] = {}
            for item in final_data:
                if isinstance(item, dict) and 'verdict' in item:
                    verdicts[item['verdict']] = verdicts.get(item['verdict'], 0) + 1
            if verdicts:
                lines.extend(["", "## Verdicts"])
                lines.extend(f"- {verdict}: {count}" for verdict, count in sorted(verdicts.items()))
        lines.extend(["", "## Log Directory", f"`{self.base_dir}`"])
        return '\n'.join(lines) + '\n'
