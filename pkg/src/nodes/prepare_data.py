import hashlib
import json
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Dict, List, Optional

from ..errors import SpectralError
from ..problems.datasets import MANIFEST_NAME, Dataset, DatasetSpec, build_dataset, load_dataset

logger = logging.getLogger(__name__)


def dataset_dirname(spec: DatasetSpec) -> str:
    """Cache directory name: problem id plus a digest of the generation settings."""
    digest = hashlib.sha1(json.dumps(spec.to_dict(), sort_keys=True).encode()).hexdigest()[:12]
    return f"{spec.problem}-{digest}"


class DataPreparer:
    """Builds datasets, reusing cached copies under ``data_dir`` when present."""

    def __init__(self, data_dir: Optional[str] = None, workers: int = 1):
        """
        Args:
            data_dir: cache directory; datasets are only kept in memory when None
            workers: threads per dataset build
        """
        self.data_dir = Path(data_dir) if data_dir else None
        self.workers = workers

    def prepare(self, spec: DatasetSpec) -> Dataset:
        if self.data_dir is None:
            return build_dataset(spec, workers=self.workers)

        directory = self.data_dir / dataset_dirname(spec)
        if (directory / MANIFEST_NAME).exists():
            dataset = load_dataset(directory)
            if dataset.spec == spec:
                logger.info(f"Loaded cached dataset {directory}")
                return dataset
            logger.warning(f"Cached dataset {directory} has other settings; rebuilding")
        return build_dataset(spec, directory, workers=self.workers)


def prepare_data_node(state: Dict) -> Dict:
    """
    LangGraph node that generates (or loads) every dataset the jobs need.

    Args:
        state: Graph state containing 'jobs' and 'config'

    Returns:
        Updated state with 'datasets' keyed by DatasetSpec
    """
    cfg = state["config"]
    jobs = state.get("jobs", [])
    errors: List[str] = list(state.get("errors", []))

    specs: List[DatasetSpec] = []
    for job in jobs:
        for spec in job.datasets():
            if spec not in specs:
                specs.append(spec)

    if not specs:
        logger.warning("No datasets to prepare")
        return {**state, "datasets": {}}

    preparer = DataPreparer(cfg.data_dir, cfg.workers)
    datasets: Dict[DatasetSpec, Dataset] = {}
    logger.info(f"Preparing {len(specs)} dataset(s)")

    if cfg.workers == 1 or len(specs) == 1:
        for spec in specs:
            try:
                datasets[spec] = preparer.prepare(spec)
            except SpectralError as e:
                error_msg = f"dataset {spec.problem} (band {spec.band}): {e}"
                logger.error(error_msg)
                errors.append(error_msg)
    else:
        with ThreadPoolExecutor(max_workers=min(cfg.workers, len(specs))) as executor:
            future_to_spec = {executor.submit(preparer.prepare, spec): spec for spec in specs}
            failed = {}
            for future in as_completed(future_to_spec):
                spec = future_to_spec[future]
                try:
                    datasets[spec] = future.result()
                except SpectralError as e:
                    failed[spec] = f"dataset {spec.problem} (band {spec.band}): {e}"
        # errors in planning order, independent of completion order
        for spec in specs:
            if spec in failed:
                logger.error(failed[spec])
                errors.append(failed[spec])

    return {
        **state,
        "datasets": datasets,
        "errors": errors,
    }
