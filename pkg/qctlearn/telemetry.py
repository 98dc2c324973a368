import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator, Optional, Union

from opentelemetry import trace
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import ConsoleSpanExporter, SimpleSpanProcessor
from prometheus_client import CollectorRegistry, Counter, Histogram, generate_latest, start_http_server

from qctlearn.settings import settings

logger = logging.getLogger("qctlearn.telemetry")

class MetricsCollector:
    """
    Prometheus metric definitions, kept on a private registry so that
    repeated construction (tests, worker processes) never collides.
    """
    def __init__(self, registry: Optional[CollectorRegistry] = None) -> None:
        self.registry = registry or CollectorRegistry()

        self.circuits_routed = Counter(
            'qct_circuits_routed_total',
            'Circuits routed',
            ['router', 'status'],
            registry=self.registry,
        )
        self.routing_failures = Counter(
            'qct_routing_failures_total',
            'Routing attempts that raised or produced an invalid circuit',
            ['router', 'reason'],
            registry=self.registry,
        )
        self.swaps_inserted = Counter(
            'qct_swaps_inserted_total',
            'SWAP gates inserted by routers',
            ['router'],
            registry=self.registry,
        )
        self.nodes_expanded = Counter(
            'qct_search_nodes_expanded_total',
            'Search-tree nodes opened',
            ['router'],
            registry=self.registry,
        )
        self.labels_generated = Counter(
            'qct_labels_generated_total',
            'Training labels produced',
            ['labeler', 'status'],
            registry=self.registry,
        )
        self.training_epochs = Counter(
            'qct_training_epochs_total',
            'Policy network training epochs completed',
            registry=self.registry,
        )

        self.routing_latency = Histogram(
            'qct_routing_seconds',
            'Wall time to route one circuit',
            ['router'],
            buckets=[0.01, 0.1, 0.5, 1.0, 5.0, 30.0, 120.0, 600.0],
            registry=self.registry,
        )

class TelemetryManager:
    """
    Centralized manager for observability.
    Singleton: every component shares one set of metrics per process.
    """
    _instance: Optional["TelemetryManager"] = None
    _initialized: bool = False

    def __new__(cls) -> "TelemetryManager":
        if cls._instance is None:
            cls._instance = super(TelemetryManager, cls).__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self) -> None:
        if self._initialized:
            return

        self.enabled = settings.telemetry.ENABLED
        self.metrics = MetricsCollector()
        self.tracer: Optional[Any] = None

        if self.enabled:
            self._setup_otel()
            try:
                start_http_server(settings.telemetry.PROMETHEUS_PORT, registry=self.metrics.registry)
                logger.info(f"Prometheus metrics exposed on port {settings.telemetry.PROMETHEUS_PORT}")
            except OSError as e:
                logger.warning(f"Could not start Prometheus server (maybe already running?): {e}")
        else:
            logger.debug("Telemetry export disabled via config.")

        self._initialized = True

    def _setup_otel(self) -> None:
        provider = TracerProvider()
        provider.add_span_processor(SimpleSpanProcessor(ConsoleSpanExporter()))
        trace.set_tracer_provider(provider)
        self.tracer = trace.get_tracer(settings.telemetry.SERVICE_NAME, "0.1.0")

    def get_tracer(self) -> Any:
        if not self.enabled:
            return trace.NoOpTracerProvider().get_tracer("noop")
        return self.tracer

    @contextmanager
    def traced(self, name: str, **attributes: Any) -> Iterator[Any]:
        """
        Opens a span named `name`. An exception leaving the block is recorded
        on the span and sets its status to ERROR before it propagates.
        """
        attrs = {k: v for k, v in attributes.items() if v is not None}
        with self.get_tracer().start_as_current_span(
            name, attributes=attrs, record_exception=False, set_status_on_exception=False
        ) as span:
            try:
                yield span
            except Exception as e:
                span.record_exception(e)
                span.set_status(trace.Status(trace.StatusCode.ERROR))
                raise

    def record_route(self, router: str, swaps: int, elapsed: float, expansions: int = 0) -> None:
        m = self.metrics
        m.circuits_routed.labels(router=router, status="ok").inc()
        m.swaps_inserted.labels(router=router).inc(swaps)
        m.routing_latency.labels(router=router).observe(elapsed)
        if expansions:
            m.nodes_expanded.labels(router=router).inc(expansions)

    def record_failure(self, router: str, reason: str) -> None:
        """
        Counts a failed routing attempt. A router that raised never finished,
        so it is also counted as an errored routing.
        """
        m = self.metrics
        m.routing_failures.labels(router=router, reason=reason).inc()
        if reason == "exception":
            m.circuits_routed.labels(router=router, status="error").inc()

    def export_text(self, path: Optional[Union[str, Path]] = None) -> str:
        """Prometheus text exposition of every metric; optionally written to `path`."""
        text = generate_latest(self.metrics.registry).decode("utf-8")
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text
