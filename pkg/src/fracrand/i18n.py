"""Language selection and message lookup for console output."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from string import Formatter
from typing import Any, Mapping, Sequence

DEFAULT_LANGUAGE = "en"
ZH_CN_LANGUAGE = "zh-cn"
ZH_TW_LANGUAGE = "zh-tw"
LANG_ENV = "FRACRAND_LANG"

_TRADITIONAL_MARKERS = ("-tw", "-hk", "-mo", "-hant")


@dataclass(frozen=True)
class LanguageInfo:
    code: str
    name: str
    aliases: tuple[str, ...]


@dataclass
class _Catalog:
    messages: dict[str, dict[str, str]] = field(default_factory=dict)
    names: dict[str, str] = field(default_factory=dict)
    aliases: dict[str, str] = field(default_factory=dict)
    issues: list[str] = field(default_factory=list)

    def register_alias(self, alias: str, language: str) -> None:
        existing = self.aliases.setdefault(alias, language)
        if existing != language:
            self.issues.append(
                f"{language}: alias '{alias}' already belongs to '{existing}'."
            )

    def aliases_of(self, language: str) -> tuple[str, ...]:
        return tuple(
            sorted(
                alias
                for alias, target in self.aliases.items()
                if target == language and alias != language
            )
        )


def _normalize_token(value: str | None) -> str:
    return (value or "").strip().lower().replace("_", "-")


def _placeholders(template: str) -> set[str]:
    names: set[str] = set()
    for _, field_name, _, _ in Formatter().parse(template):
        if field_name:
            names.add(field_name.split(".", maxsplit=1)[0].split("[", maxsplit=1)[0])
    return names


def _string_messages(raw: object, language: str, issues: list[str]) -> dict[str, str]:
    if not isinstance(raw, dict):
        issues.append(f"{language}: 'messages' must be a JSON object.")
        return {}
    messages: dict[str, str] = {}
    for key, value in raw.items():
        if isinstance(key, str) and isinstance(value, str):
            messages[key] = value
        else:
            issues.append(f"{language}: entry {key!r} must map a string to a string.")
    return messages


def _read_locale_files() -> tuple[dict[str, dict[str, Any]], list[str]]:
    locale_dir = resources.files("fracrand").joinpath("locales")
    payloads: dict[str, dict[str, Any]] = {}
    issues: list[str] = []
    for entry in sorted(locale_dir.iterdir(), key=lambda item: item.name):
        if not entry.name.endswith(".json"):
            continue
        language = _normalize_token(entry.name[: -len(".json")])
        try:
            with entry.open("r", encoding="utf-8") as stream:
                payload = json.load(stream)
        except (OSError, json.JSONDecodeError) as exc:
            issues.append(f"{language}: failed to load locale file: {exc}.")
            continue
        if isinstance(payload, dict):
            payloads[language] = payload
        else:
            issues.append(f"{language}: locale file must contain a JSON object.")
    return payloads, issues


def _build_catalog() -> _Catalog:
    payloads, issues = _read_locale_files()
    catalog = _Catalog(issues=issues)

    default_payload = payloads.get(DEFAULT_LANGUAGE)
    if default_payload is None:
        raise RuntimeError("Missing default locale file: fracrand/locales/en.json")
    defaults = _string_messages(default_payload.get("messages"), DEFAULT_LANGUAGE, issues)
    if not defaults:
        raise RuntimeError("Default locale does not define any messages.")

    ordered = [DEFAULT_LANGUAGE] + sorted(code for code in payloads if code != DEFAULT_LANGUAGE)
    for language in ordered:
        payload = payloads[language]
        merged = dict(defaults)
        if language != DEFAULT_LANGUAGE:
            localized = _string_messages(payload.get("messages"), language, issues)
            for key, text in localized.items():
                if key not in defaults:
                    issues.append(f"{language}: key '{key}' is not present in {DEFAULT_LANGUAGE}.")
                elif _placeholders(text) != _placeholders(defaults[key]):
                    issues.append(
                        f"{language}: placeholder mismatch for '{key}', using {DEFAULT_LANGUAGE}."
                    )
                    continue
                merged[key] = text
            for key in sorted(set(defaults) - set(localized)):
                issues.append(f"{language}: missing key '{key}', using {DEFAULT_LANGUAGE}.")

        catalog.messages[language] = merged
        name = payload.get("name")
        catalog.names[language] = name.strip() if isinstance(name, str) and name.strip() else language
        catalog.register_alias(language, language)
        raw_aliases = payload.get("aliases")
        for alias in raw_aliases if isinstance(raw_aliases, list) else ():
            if isinstance(alias, str) and _normalize_token(alias):
                catalog.register_alias(_normalize_token(alias), language)
    return catalog


_CATALOG = _build_catalog()
_current_language = DEFAULT_LANGUAGE


def available_languages() -> list[LanguageInfo]:
    return [
        LanguageInfo(code=code, name=_CATALOG.names[code], aliases=_CATALOG.aliases_of(code))
        for code in _CATALOG.messages
    ]


def translation_issues() -> tuple[str, ...]:
    return tuple(_CATALOG.issues)


def normalize_language(value: str | None) -> str:
    normalized = _normalize_token(value)
    if not normalized:
        return DEFAULT_LANGUAGE
    if normalized in _CATALOG.aliases:
        return _CATALOG.aliases[normalized]

    base = normalized.split("-", maxsplit=1)[0]
    if base == "zh":
        if any(marker in normalized for marker in _TRADITIONAL_MARKERS):
            return ZH_TW_LANGUAGE if ZH_TW_LANGUAGE in _CATALOG.messages else DEFAULT_LANGUAGE
        return ZH_CN_LANGUAGE if ZH_CN_LANGUAGE in _CATALOG.messages else DEFAULT_LANGUAGE
    return _CATALOG.aliases.get(base, DEFAULT_LANGUAGE)


def detect_language(preferred: str | None = None, env: Mapping[str, str] | None = None) -> str:
    """Explicit choice first, then FRACRAND_LANG, then English."""
    if preferred and preferred.strip():
        return normalize_language(preferred)
    resolved_env = os.environ if env is None else env
    return normalize_language(resolved_env.get(LANG_ENV))


def set_language(language: str | None) -> str:
    global _current_language
    _current_language = detect_language(language)
    return _current_language


def get_language() -> str:
    return _current_language


def peek_cli_language(argv: Sequence[str]) -> str | None:
    """Find --lang before argparse runs so help text is already translated."""
    for index, arg in enumerate(argv):
        if arg.startswith("--lang="):
            return arg.split("=", maxsplit=1)[1]
        if arg == "--lang":
            following = argv[index + 1] if index + 1 < len(argv) else None
            return None if following is None or following.startswith("-") else following
    return None


def t(key: str, **kwargs: object) -> str:
    text = _CATALOG.messages.get(_current_language, {}).get(key)
    if text is None:
        text = _CATALOG.messages[DEFAULT_LANGUAGE].get(key, key)
    if not kwargs:
        return text
    try:
        return text.format(**kwargs)
    except (IndexError, KeyError, ValueError):
        return text
