# psa/cli/metrics.py
import time
import threading
from typing import Dict, Any
from collections import defaultdict, deque
import logging

logger = logging.getLogger(__name__)


class RunMetrics:
    """Collect run counts and timings across a sweep"""

    def __init__(self, max_samples: int = 1000):
        self.start_time = time.time()
        self.lock = threading.Lock()

        self.total_runs = 0
        self.wall_times = deque(maxlen=max_samples)
        self.algorithm_stats = defaultdict(lambda: {"count": 0, "total_time": 0.0, "iterations": 0})
        self.status_counts = defaultdict(int)

    def record_run(self, algorithm: str, status: str, wall_time_ms: float, iterations: int = None):
        """Record a completed run"""
        with self.lock:
            self.total_runs += 1
            stats = self.algorithm_stats[algorithm]
            stats["count"] += 1
            stats["total_time"] += wall_time_ms
            stats["iterations"] += iterations or 0
            self.status_counts[status] += 1
            self.wall_times.append(wall_time_ms)

    def get_metrics(self) -> Dict[str, Any]:
        """Get current metrics summary"""
        with self.lock:
            per_algorithm = {}
            for name, stats in self.algorithm_stats.items():
                count = stats["count"]
                per_algorithm[name] = {
                    "runs": count,
                    "average_time_ms": stats["total_time"] / count if count else 0,
                    "average_iterations": stats["iterations"] / count if count else 0,
                }
            non_converged = sum(v for k, v in self.status_counts.items() if k != "converged")
            return {
                "total_runs": self.total_runs,
                "non_converged": non_converged,
                "status_counts": dict(self.status_counts),
                "algorithms": per_algorithm,
                "wall_time_percentiles": self._calculate_percentiles(),
                "elapsed_s": time.time() - self.start_time,
            }

    def _calculate_percentiles(self) -> Dict[str, float]:
        if not self.wall_times:
            return {"p50": 0, "p90": 0, "p99": 0}

        sorted_times = sorted(self.wall_times)
        n = len(sorted_times)

        return {
            "p50": sorted_times[int(n * 0.5)],
            "p90": sorted_times[int(n * 0.9)],
            "p99": sorted_times[int(n * 0.99)],
        }

    def log_summary(self):
        metrics = self.get_metrics()
        logger.info(f"Sweep summary: {metrics['total_runs']} runs, {metrics['non_converged']} not converged, "
                    f"p50={metrics['wall_time_percentiles']['p50']:.1f}ms, "
                    f"p90={metrics['wall_time_percentiles']['p90']:.1f}ms",
                    extra={"metrics": metrics})
