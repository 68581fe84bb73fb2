from __future__ import annotations

import json
import unittest
from pathlib import Path
from unittest.mock import patch

from fracrand.i18n import (
    DEFAULT_LANGUAGE,
    LANG_ENV,
    ZH_CN_LANGUAGE,
    ZH_TW_LANGUAGE,
    available_languages,
    detect_language,
    get_language,
    normalize_language,
    peek_cli_language,
    set_language,
    t,
    translation_issues,
)

LOCALE_DIR = Path(__file__).resolve().parents[1] / "src" / "fracrand" / "locales"


class I18nTests(unittest.TestCase):
    def setUp(self) -> None:
        self._original_language = get_language()
        set_language("en")

    def tearDown(self) -> None:
        set_language(self._original_language)

    def test_normalize_language_aliases(self) -> None:
        self.assertEqual(normalize_language("en-US"), DEFAULT_LANGUAGE)
        self.assertEqual(normalize_language("zh"), ZH_CN_LANGUAGE)
        self.assertEqual(normalize_language("zh_CN"), ZH_CN_LANGUAGE)
        self.assertEqual(normalize_language("zh-TW"), ZH_TW_LANGUAGE)
        self.assertEqual(normalize_language("zh-Hant"), ZH_TW_LANGUAGE)
        self.assertEqual(normalize_language("zh-Hant-HK"), ZH_TW_LANGUAGE)
        self.assertEqual(normalize_language("fr"), DEFAULT_LANGUAGE)
        self.assertEqual(normalize_language(None), DEFAULT_LANGUAGE)

    def test_detect_language_prefers_explicit_value(self) -> None:
        with patch.dict("os.environ", {LANG_ENV: "zh-CN"}, clear=False):
            self.assertEqual(detect_language("en"), DEFAULT_LANGUAGE)
            self.assertEqual(detect_language(None), ZH_CN_LANGUAGE)

    def test_peek_cli_language_supports_both_argument_styles(self) -> None:
        self.assertEqual(peek_cli_language(["verify", "--lang", "zh-CN"]), "zh-CN")
        self.assertEqual(peek_cli_language(["--lang=zh-TW"]), "zh-TW")
        self.assertIsNone(peek_cli_language(["--lang", "--seed"]))
        self.assertIsNone(peek_cli_language(["verify"]))

    def test_translation_switches_with_language(self) -> None:
        set_language("zh-CN")
        self.assertEqual(t("cli.log.done"), "完成。")
        set_language("zh-TW")
        self.assertEqual(t("cli.section.unscramble"), "還原")
        set_language("en")
        self.assertEqual(t("cli.log.checks_passed", count=3), "All 3 checks passed.")

    def test_unknown_key_falls_back_to_key(self) -> None:
        self.assertEqual(t("no.such.key"), "no.such.key")

    def test_available_languages_includes_aliases(self) -> None:
        languages = {language.code: language for language in available_languages()}
        self.assertEqual(list(languages)[0], DEFAULT_LANGUAGE)
        self.assertIn("en-us", languages[DEFAULT_LANGUAGE].aliases)
        self.assertIn("zh", languages[ZH_CN_LANGUAGE].aliases)
        self.assertIn("zh-hant", languages[ZH_TW_LANGUAGE].aliases)

    def test_bundled_catalog_has_no_i18n_issues(self) -> None:
        self.assertEqual(translation_issues(), ())

    def test_catalogs_share_the_same_keys(self) -> None:
        keys = {
            path.stem: set(json.loads(path.read_text(encoding="utf-8"))["messages"])
            for path in LOCALE_DIR.glob("*.json")
        }
        self.assertEqual(keys[ZH_CN_LANGUAGE], keys[DEFAULT_LANGUAGE])
        self.assertEqual(keys[ZH_TW_LANGUAGE], keys[DEFAULT_LANGUAGE])


if __name__ == "__main__":
    unittest.main()
