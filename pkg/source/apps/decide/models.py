from dataclasses import dataclass

from source.apps.core.services import Report
from source.apps.semimodules.models import HomMap


@dataclass(frozen=True)
class Retraction:
    """M is a retract of E: section M -> E, retract E -> M, retract after section = id"""
    section: HomMap
    retract: HomMap

    @property
    def inner(self):
        return self.section.dom

    @property
    def outer(self):
        return self.section.cod

    def verify(self) -> Report:
        """Re-check both homomorphisms and the composition by direct evaluation"""
        for role, hom in (('section', self.section), ('retract', self.retract)):
            report = hom.check()
            if report.failed:
                return Report.failed_with('retraction', f"{role}: {report.error}", report.witness)
        composite = self.retract.compose(self.section)
        if not composite.is_identity():
            x = next(i for i, y in enumerate(composite.map) if y != i)
            return Report.failed_with('retraction', f"retract(section({x})) = {composite.map[x]}", (x,))
        return Report.passed('retraction', {'inner': self.inner.size, 'outer': self.outer.size})

    def to_dict(self) -> dict:
        return {
            'inner': self.inner.name,
            'outer': self.outer.name,
            'section': list(self.section.map),
            'retract': list(self.retract.map),
        }
