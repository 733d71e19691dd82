import logging

from django.core.management.base import BaseCommand, CommandError

from conformal import app_settings
from conformal.exporters import get_exporter_class
from conformal.physics.mass import Convention
from conformal.specfile import load_spec
from conformal.suites import SUITES, eom_report, geometry_report, mass_report, tables_report
from conformal.tasks import dispatch
from conformal.utils import ConventionError, ExpressionError, SpecFileError, UnsupportedInput


logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3

INPUT_ERRORS = (SpecFileError, ExpressionError, ConventionError, UnsupportedInput, ValueError)


class Command(BaseCommand):
    help = "Curvature reports, verification suites, mass relations and component equations."

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest="subcommand", required=True)

        def with_output(sub):
            sub.add_argument("--format", default="text", help="Report format: text or json")
            sub.add_argument("--out", help="Write the report to this path instead of stdout")
            sub.add_argument("--strict", action="store_true", default=None,
                             help="Count undecided zero tests as failures")
            return sub

        report = with_output(subparsers.add_parser("report", help="Curvature pipeline of a spec file"))
        report.add_argument("file")

        verify = with_output(subparsers.add_parser("verify", help="Run verification suites on a spec file"))
        verify.add_argument("file")
        verify.add_argument("--suite", action="append", choices=sorted(SUITES), dest="suites",
                            help="Suite to run; repeat for several")
        verify.add_argument("--weight", default="symbolic")

        mass = with_output(subparsers.add_parser("mass", help="Mass, bound and weight classification"))
        mass.add_argument("--spin", required=True)
        mass.add_argument("--dim", required=True)
        mass.add_argument("--weight", default="symbolic")
        mass.add_argument("--convention", default=Convention.STANDARD.value,
                          choices=[c.value for c in Convention])
        mass.add_argument("--P", dest="schouten", help="Schouten trace expression in d and Lambda")

        eom = with_output(subparsers.add_parser("eom", help="Component equation of one spin"))
        eom.add_argument("file")
        eom.add_argument("--spin", required=True)
        eom.add_argument("--weight", default="symbolic")

        tables = with_output(subparsers.add_parser("spin2-tables", help="Recompute the spin two tables"))
        tables.add_argument("file")
        tables.add_argument("--weight", default="symbolic")

    def handle(self, *args, **options):
        strict = app_settings.CONFORMAL_STRICT if options["strict"] is None else options["strict"]
        try:
            exporter_class = get_exporter_class(options["format"])
            report = self.build_report(options)
        except INPUT_ERRORS as exc:
            raise CommandError(str(exc), returncode=EXIT_INPUT)
        except CommandError:
            raise
        except Exception as exc:
            logger.exception("Internal error in %s", options["subcommand"])
            raise CommandError(f"Internal error: {exc}", returncode=EXIT_INTERNAL)

        exporter = exporter_class(report)
        output = exporter.get_output(verbose=options["verbosity"] >= 2)
        if options["out"]:
            with open(options["out"], "w", encoding="utf-8") as f:
                f.write(output)
            self.stdout.write(f"Wrote {options['out']}")
        else:
            self.stdout.write(output, ending="")

        undecided = [r for r in report.records if r.status.value == "undecided"]
        if undecided and not strict:
            logger.warning("%s undecided checks passed in lax mode", len(undecided))
        failures = report.failures(strict)
        if failures:
            raise CommandError(f"{len(failures)} checks failed", returncode=EXIT_FAILURE)

    def build_report(self, options):
        subcommand = options["subcommand"]
        if subcommand == "mass":
            argv = [f"--{k}={options[k]}" for k in ("spin", "dim", "weight", "convention", "schouten")]
            return mass_report(options["spin"], options["dim"], options["weight"], options["convention"],
                               options["schouten"], argv)
        spec = load_spec(options["file"])
        if subcommand == "verify":
            return dispatch(spec.source, options["suites"], options["weight"])
        bundle = spec.build()
        if subcommand == "report":
            return geometry_report(bundle)
        if subcommand == "eom":
            return eom_report(bundle, options["spin"], options["weight"])
        return tables_report(bundle, options["weight"])
