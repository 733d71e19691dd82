import logging

from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


logger = logging.getLogger(__name__)


class ConformalAppConfig(AppConfig):

    name = "conformal"
    verbose_name = _("Conformal Tractors")
    default_auto_field = "django.db.models.AutoField"

    def ready(self):
        from conformal import app_settings
        if app_settings.CONFORMAL_ZERO_TEST_SAMPLES < 20:
            logger.warning(
                "CONFORMAL_ZERO_TEST_SAMPLES=%s is below the minimum of 20; using 20.",
                app_settings.CONFORMAL_ZERO_TEST_SAMPLES,
            )
