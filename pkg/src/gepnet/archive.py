"""
Weight Archive Serialization
Files use the '.gepw' extension, magic b'GEPW' and the tensor container
of utils.binary_io. Metadata carries the GNN hyperparameters, the number
of classes and the training record.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from ..gnn.params import GnnHyperparams, GnnParameters, parameter_shapes
from ..utils.binary_io import read_tensor_file, write_tensor_file
from ..utils.exceptions import ArchiveShapeError, MissingArchiveError

logger = logging.getLogger(__name__)

ARCHIVE_MAGIC = b'GEPW'
ARCHIVE_VERSION = 1
ARCHIVE_EXTENSION = '.gepw'


@dataclass
class WeightArchive:
    """Parameters plus how they were produced (snr_train_db, seed, step, alpha, ...)"""
    params: GnnParameters
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def hyperparams(self) -> GnnHyperparams:
        return self.params.hyperparams


def serialize(archive: WeightArchive, path) -> Path:
    params = archive.params
    meta = {
        'hyperparams': params.hyperparams.as_dict(),
        'num_classes': params.num_classes,
        'training': archive.metadata,
    }
    path = write_tensor_file(Path(path), ARCHIVE_MAGIC, ARCHIVE_VERSION, meta, params.tensors)
    logger.info(f"Saved weight archive to {path}")
    return path


def deserialize(path, expected_hyperparams: Optional[GnnHyperparams] = None,
                num_classes: Optional[int] = None) -> WeightArchive:
    """Load and verify an archive

    When expected_hyperparams or num_classes are given, every tensor is
    checked against the shapes they imply; the first mismatch names the
    tensor.
    """
    path = Path(path)
    if not path.exists():
        raise MissingArchiveError(f"Weight archive not found: {path}")

    meta, tensors = read_tensor_file(path, ARCHIVE_MAGIC, ARCHIVE_VERSION)
    stored_hp = GnnHyperparams(**meta['hyperparams'])
    stored_classes = int(meta['num_classes'])

    hyperparams = expected_hyperparams or stored_hp
    classes = stored_classes if num_classes is None else num_classes
    for name, shape in parameter_shapes(hyperparams, classes).items():
        if name not in tensors:
            raise ArchiveShapeError(name, shape, ())
        if tensors[name].shape != shape:
            raise ArchiveShapeError(name, shape, tensors[name].shape)

    params = GnnParameters(stored_hp, stored_classes, tensors)
    return WeightArchive(params=params, metadata=meta.get('training', {}))
