from __future__ import annotations

import unittest
from pathlib import Path
from unittest.mock import patch

from fracrand import ui
from fracrand.config import Settings
from fracrand.i18n import get_language, set_language
from fracrand.pipeline import CheckResult, VerifyReport


class UIFallbackRenderingTests(unittest.TestCase):
    def setUp(self) -> None:
        self._original_language = get_language()
        set_language("en")

    def tearDown(self) -> None:
        set_language(self._original_language)

    def test_render_settings_contains_parameters(self) -> None:
        settings = Settings(seed=7, alpha=0.6, m=1.0, n=64, sine_seed=11)
        with patch("fracrand.ui._RICH_AVAILABLE", False), patch(
            "fracrand.ui.use_color", return_value=False
        ):
            rendered = ui.render_settings(settings, family="redfrnt_even")

        self.assertIn("Family: redfrnt_even", rendered)
        self.assertIn("Seed: 7", rendered)
        self.assertIn("Alpha: 0.6", rendered)
        self.assertIn("Period M: 1", rendered)
        self.assertIn("Basis size N: 64", rendered)
        self.assertIn("Sine seed: 11", rendered)
        self.assertNotIn("Tolerance", rendered)

    def test_render_check_report_fallback_lists_each_check(self) -> None:
        report = VerifyReport(
            (
                CheckResult("unitarity[dfrnt]", 2.5e-15, 1e-10),
                CheckResult("additivity[dfrnt]", 0.3, 1e-10),
            )
        )
        with patch("fracrand.ui._RICH_AVAILABLE", False), patch(
            "fracrand.ui.use_color", return_value=False
        ):
            rendered = ui.render_check_report(report)

        lines = rendered.splitlines()
        self.assertEqual(len(lines), 2)
        self.assertIn("unitarity[dfrnt]", lines[0])
        self.assertIn("2.500e-15 <= 1.0e-10", lines[0])
        self.assertTrue(lines[0].endswith("pass"))
        self.assertTrue(lines[1].endswith("FAIL"))

    def test_render_paths_fallback_uses_bulleted_list(self) -> None:
        with patch("fracrand.ui._RICH_AVAILABLE", False):
            rendered = ui.render_paths([Path("out/p.csv"), Path("out/q.csv")])
        self.assertIn("  - out/p.csv", rendered)
        self.assertIn("  - out/q.csv", rendered)

    def test_empty_lists_render_none_marker(self) -> None:
        self.assertEqual(ui.render_paths([]), "  (none)")
        self.assertEqual(ui.render_check_report(VerifyReport(())), "  (none)")

    def test_status_prefix_without_color(self) -> None:
        with patch("fracrand.ui._RICH_AVAILABLE", False), patch(
            "fracrand.ui.use_color", return_value=False
        ):
            self.assertEqual(ui.success("done"), "[OK] done")
            self.assertEqual(ui.error("bad"), "[ERROR] bad")

    def test_rich_rendering_includes_check_names(self) -> None:
        report = VerifyReport((CheckResult("fast_path[redfrnt_odd]", 1e-13, 1e-9),))
        with patch("fracrand.ui.use_color", return_value=False):
            rendered = ui.render_check_report(report)
        self.assertIn("fast_path[redfrnt_odd]", rendered)


if __name__ == "__main__":
    unittest.main()
