import logging

from django.apps import AppConfig

logger = logging.getLogger(__name__)


class PosetsConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "posets"

    def ready(self):
        # Initialize OpenTelemetry once the settings are loaded
        try:
            from latticelab.otel import setup_otel

            setup_otel()
        except Exception as e:
            logger.warning(f"Failed to initialize OpenTelemetry: {e}")
