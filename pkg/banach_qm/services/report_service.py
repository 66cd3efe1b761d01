"""
Report generation service for physicality checks and measurements
"""

from typing import Any, Dict, List, Optional

from ..models import MeasurementReport, PhysicalityVerdict, StateFunctional

RULE = "═" * 75


class ReportService:
    """Generates check and measurement reports"""

    def generate_check_report(self, command: str, verdict: PhysicalityVerdict, state: StateFunctional,
                              subject: str, closed_form: Optional[bool] = None) -> Dict[str, Any]:
        """Collect a physicality verdict into a report dictionary"""

        report = {
            "command": command,
            "subject": subject,
            "space": {"dim": state.space.dim, "p": state.space.p},
            "state_terms": len(state.terms),
            "renormalized": state.renormalized,
            "evaluations": [(e.label, e.value) for e in verdict.evaluations],
            "violations": [(v.label, v.value, v.reason) for v in verdict.violations],
            "status": self._determine_status(verdict),
            "exhaustive": verdict.exhaustive,
            "closed_form": closed_form,
        }
        report["recommendations"] = self._generate_recommendations(report)
        return report

    def generate_measurement_report(self, report: MeasurementReport, subject: str,
                                    samples: Optional[Dict[float, int]] = None) -> Dict[str, Any]:
        """Collect a measurement into a report dictionary"""

        data = {
            "command": "measure",
            "subject": subject,
            "evaluations": [(f"p(lambda={o.eigenvalue:.6g})", o.raw_value) for o in report.eigenvalue_outcomes],
            "violations": [
                (f"p(lambda={o.eigenvalue:.6g})", o.raw_value, "outside_unit_interval")
                for o in report.eigenvalue_outcomes if o.probability is None
            ],
            "status": "PHYSICAL" if report.physical else "NOT_PHYSICAL",
            "expectation": report.expectation,
            "conservation_residual": report.conservation_residual,
            "conserved": report.conserved,
            "renormalized": report.renormalized,
            "input_norm": report.input_norm,
            "samples": samples,
            "exhaustive": True,
            "closed_form": None,
        }
        data["recommendations"] = self._generate_recommendations(data)
        return data

    def _determine_status(self, verdict: PhysicalityVerdict) -> str:
        if verdict.is_physical:
            return "PHYSICAL"
        reasons = {v.reason for v in verdict.violations}
        if reasons == {"non_real"}:
            return "NOT_PHYSICAL (complex values)"
        return "NOT_PHYSICAL"

    def _generate_recommendations(self, report: Dict[str, Any]) -> List[str]:
        """Notes derived from the verdict"""
        notes = []

        if report.get("renormalized"):
            notes.append("State vector was not a unit vector and has been renormalized in the p-norm")

        if report["violations"]:
            non_real = [label for label, _, reason in report["violations"] if reason == "non_real"]
            if non_real:
                notes.append(f"Complex expectation values at: {', '.join(non_real[:5])}")
            notes.append("Outcome probabilities are not defined at this state; sampling is disabled")

        if not report.get("exhaustive", True):
            notes.append("Too many atoms for an exhaustive check; only atoms and their complements were tested")

        closed_form = report.get("closed_form")
        if closed_form is not None and closed_form != (not report["violations"]):
            notes.append("Closed-form condition disagrees with the generic check (state is near the boundary)")

        if report.get("conserved") is False:
            notes.append(f"Probability conservation residual {report['conservation_residual']:.3e} exceeds tolerance")

        if not notes:
            notes.append("All checks passed.")

        return notes

    def generate_text_report(self, report_data: Dict[str, Any]) -> str:
        """Generate a human-readable text report"""

        text = f"""
{RULE}
  {report_data['command'].upper()} REPORT: {report_data['subject']}
{RULE}

Status: {report_data['status']}
"""
        if "space" in report_data:
            text += f"Space: dim={report_data['space']['dim']}, p={report_data['space']['p']:g}\n"
        if report_data.get("closed_form") is not None:
            text += f"Closed form: {'physical' if report_data['closed_form'] else 'not physical'}\n"
        if "expectation" in report_data:
            e = report_data["expectation"]
            text += f"Expectation: {e.real:.12g} {e.imag:+.3e}i\n"
            text += f"Conservation residual: {report_data['conservation_residual']:.3e}\n"

        text += "\n=== VALUES ===\n"
        for label, value in report_data["evaluations"]:
            text += f"  {label}: {value.real:.12g} {value.imag:+.3e}i\n"

        if report_data.get("samples"):
            text += "\n=== SAMPLES ===\n"
            for eigenvalue, count in report_data["samples"].items():
                text += f"  lambda={eigenvalue:.6g}: {count}\n"

        text += "\n=== VIOLATIONS ===\n"
        if report_data["violations"]:
            for label, value, reason in report_data["violations"]:
                text += f"  ✗ {label}: {value.real:.6g} {value.imag:+.3e}i ({reason})\n"
        else:
            text += "  ✓ none\n"

        text += "\n=== NOTES ===\n"
        for i, note in enumerate(report_data["recommendations"], 1):
            text += f"  {i}. {note}\n"

        return text


# Global instance
report_service = ReportService()
