"""Machine-readable output of an experiment. JSON documents have the keys
`config`, `results`, `witnesses` and `mode`, are written with sorted keys and
carry no timestamps, so identical runs produce identical bytes. CSV output
lists profile rows when the experiment produced profiles and one row per
check otherwise."""
from __future__ import annotations
import csv
import io
import json

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from coarse_maps.defects import EXACT, SAMPLED, CheckResult, DefectProfile


PROFILE_COLUMNS = ('kind', 'radius', 'set_size', 'max_norm', 'mode')
CHECK_COLUMNS = ('name', 'verdict', 'mode', 'witness')
FORMATS = ('csv', 'json')


def profile_summary(profile: DefectProfile) -> Dict[str, Any]:
    return {
        'kind': profile.kind,
        'max_norms': profile.max_norms,
        'classification': profile.classification.value,
        'window': profile.window,
        'mode': profile.mode,
    }


def check_summary(result: CheckResult) -> Dict[str, Any]:
    return {
        'name': result.name,
        'holds': result.holds,
        'verdict': result.verdict,
        'witness': result.witness,
        'mode': result.mode,
        'details': result.details,
    }


@dataclass
class Report:
    command: str
    config: Dict[str, Any]
    profiles: List[DefectProfile] = field(default_factory=list)
    results: List[Dict[str, Any]] = field(default_factory=list)
    witnesses: List[Dict[str, Any]] = field(default_factory=list)
    violated: bool = False
    modes: List[str] = field(default_factory=list)

    def add_profile(self, profile: DefectProfile):
        self.profiles.append(profile)
        self.results.append(profile_summary(profile))
        self.modes.append(profile.mode)

    def add_check(self, result: CheckResult):
        self.results.append(check_summary(result))
        self.modes.append(result.mode)
        if result.witness:
            self.witnesses.append({'name': result.name, **result.witness})
        if result.holds is False:
            self.violated = True

    def add_result(self, result: Dict[str, Any], mode: str = EXACT):
        self.results.append(result)
        self.modes.append(mode)

    def expect(self, name: str, expected: Optional[str], actual: str):
        """Marks the report violated when an expectation was given and differs."""
        if expected is None:
            return
        if str(expected).lower() != str(actual).lower():
            self.violated = True
            self.witnesses.append({'name': name, 'expected': str(expected), 'actual': str(actual)})

    @property
    def mode(self) -> str:
        return SAMPLED if SAMPLED in self.modes else EXACT

    def to_dict(self) -> Dict[str, Any]:
        return {
            'config': self.config,
            'results': self.results,
            'witnesses': self.witnesses,
            'mode': self.mode,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + '\n'

    def to_csv(self) -> str:
        buffer = io.StringIO()
        if self.profiles:
            writer = csv.DictWriter(buffer, fieldnames=PROFILE_COLUMNS, lineterminator='\n')
            writer.writeheader()
            for profile in self.profiles:
                for row in profile.rows:
                    writer.writerow({'kind': profile.kind, 'radius': row.radius,
                                     'set_size': row.set_size, 'max_norm': row.max_norm,
                                     'mode': row.mode})
        else:
            writer = csv.DictWriter(buffer, fieldnames=CHECK_COLUMNS, lineterminator='\n',
                                    extrasaction='ignore')
            writer.writeheader()
            for result in self.results:
                witness = result.get('witness')
                writer.writerow({'name': result.get('name', self.command),
                                 'verdict': result.get('verdict', result.get('value', '')),
                                 'mode': result.get('mode', EXACT),
                                 'witness': json.dumps(witness, sort_keys=True, ensure_ascii=False)
                                            if witness else ''})
        return buffer.getvalue()

    def render(self, fmt: str) -> str:
        if fmt == 'json':
            return self.to_json()
        if fmt == 'csv':
            return self.to_csv()
        raise ValueError(f'unknown format {fmt!r}; use one of {FORMATS}')
