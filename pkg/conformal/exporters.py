import json
from io import StringIO

from django.core.serializers.json import DjangoJSONEncoder
from django.utils.module_loading import import_string
from django.utils.text import get_valid_filename, slugify

from conformal import app_settings
from conformal.utils import UnsupportedInput


def get_exporter_class(format):
    exporters = dict(app_settings.CONFORMAL_REPORT_EXPORTERS)
    if format not in exporters:
        raise UnsupportedInput(f"Unknown report format {format!r}; choose from {sorted(exporters)}")
    return import_string(exporters[format])


class BaseExporter:

    name = ""
    content_type = ""
    file_extension = ""

    def __init__(self, report):
        self.report = report

    def get_output(self, **kwargs):
        value = self.get_file_output(**kwargs).getvalue()
        return value

    def get_file_output(self, **kwargs):
        return self._get_output(self.report, **kwargs)

    def _get_output(self, report, **kwargs):
        """
        :param report: Report
        :param kwargs: Optional. Any exporter-specific arguments.
        :return: File-like object
        """
        raise NotImplementedError

    def get_filename(self):
        return get_valid_filename(slugify(self.report.title) or "report") + self.file_extension


class TextExporter(BaseExporter):

    name = "Text"
    content_type = "text/plain"
    file_extension = ".txt"

    def _get_output(self, report, **kwargs):
        verbose = kwargs.get("verbose", True)
        out = StringIO()
        if report.title:
            out.write(f"{report.title}\n")
        out.write(f"version: {report.version}\n")
        if report.digest:
            out.write(f"digest: {report.digest}\n")
        quantities = sorted(report.quantities.items())
        if quantities:
            out.write("\n")
            for name, value in quantities:
                out.write(f"{name} = {value}\n")
        records = report.sorted_records()
        if records:
            out.write("\n")
            for r in records:
                out.write(f"[{r.status.value}] {r.suite}/{r.name}")
                if verbose:
                    out.write(f" ({r.anchor})")
                    if r.detail:
                        out.write(f" {r.detail}")
                out.write("\n")
                # failures always carry their residual
                if r.residual and (verbose or r.status.is_failure(strict=True)):
                    out.write(f"    residual: {r.residual}\n")
        counts = ", ".join(f"{k}: {v}" for k, v in report.counts().items() if v)
        out.write(f"\n{counts or 'no checks'}\n")
        if report.timings:
            for name, seconds in sorted(report.timings.items()):
                out.write(f"{name}: {seconds}s\n")
        return out


class JSONExporter(BaseExporter):

    name = "JSON"
    content_type = "application/json"
    file_extension = ".json"

    def _get_output(self, report, **kwargs):
        json_data = json.dumps(report.to_dict(), cls=DjangoJSONEncoder, sort_keys=True, indent=2)
        return StringIO(json_data + "\n")
