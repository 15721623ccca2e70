"""
OpenTelemetry configuration for latticelab.
"""
import logging
from opentelemetry import trace
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor, ConsoleSpanExporter
from opentelemetry.sdk.resources import Resource
from opentelemetry.exporter.otlp.proto.http.trace_exporter import OTLPSpanExporter
from django.conf import settings

logger = logging.getLogger(__name__)


def setup_otel():
    """Install a tracer provider so search and probe spans are exported."""
    otel_enabled = getattr(settings, "OTEL_ENABLED", False)
    if not otel_enabled:
        logger.debug("OpenTelemetry is disabled. Spans stay no-ops.")
        return False

    service_name = getattr(settings, "OTEL_SERVICE_NAME", "latticelab")
    otlp_endpoint = getattr(
        settings, "OTEL_EXPORTER_OTLP_ENDPOINT", "http://localhost:4318/v1/traces"
    )

    resource = Resource.create({"service.name": service_name})
    tracer_provider = TracerProvider(resource=resource)
    trace.set_tracer_provider(tracer_provider)

    exporter_type = getattr(settings, "OTEL_EXPORTER_TYPE", "console").lower()

    if exporter_type == "otlp":
        # endpoint should point to an OpenTelemetry Collector
        exporter = OTLPSpanExporter(endpoint=otlp_endpoint)
        logger.info(f"Using OTLP exporter with endpoint: {otlp_endpoint}")
    else:
        exporter = ConsoleSpanExporter()
        logger.info("Using console span exporter")

    tracer_provider.add_span_processor(BatchSpanProcessor(exporter))

    logger.info(f"OpenTelemetry tracing enabled for service: {service_name}")
    return True
