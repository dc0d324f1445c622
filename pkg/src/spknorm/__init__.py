"""Speaker and phone subspace analysis for frame-level speech features.

The package discovers low-dimensional speaker and phone subspaces in
frame-level representations by PCA over per-group mean vectors, measures
how orthogonal the two subspaces are, removes the speaker subspace from
every frame (collapse), and evaluates the effect with linear probes and
ABX phone discrimination.
"""

from .abx import (
    AbxCell,
    AbxReport,
    TriphoneToken,
    abx_error,
    dtw_distance,
    extract_triphones,
    frame_distance_matrix,
    write_cells_csv,
    write_report_json,
)
from .aggregate import (
    AggregateMatrix,
    aggregate_by_phone,
    aggregate_by_speaker,
    aggregate_joint,
    write_aggregate_tsv,
)
from .corpus import (
    AlignmentTable,
    FeatureFile,
    FrameTable,
    Manifest,
    ManifestEntry,
    Segment,
    build_frame_table,
    label_frames,
    read_alignments,
    read_feature_file,
    read_manifest,
    validate_manifest,
    write_alignments,
    write_feature_file,
    write_manifest,
)
from .exceptions import (
    CorruptionError,
    DataError,
    DegenerateError,
    FormatError,
    LabelingError,
    SpknormError,
)
from .normalize import center, standardize
from .pca import (
    PcaBasis,
    fit_pca,
    num_components_for_variance,
    project_coordinates,
    read_pca_basis,
    write_pca_basis,
)
from .pipeline import (
    PipelineConfig,
    RunReport,
    TOOL_VERSION,
    emit_plot_data,
    run_pipeline,
    write_report,
)
from .probe import (
    ProbeConfig,
    ProbeModel,
    SplitSpec,
    evaluate_probe,
    split_half_by_speaker,
    train_probe,
)
from .subspace import (
    OrthogonalityStats,
    SimilarityMatrix,
    collapse,
    collapse_frame_table,
    direction_similarity,
    orthogonality_stats,
    principal_angles,
    write_similarity_csv,
)
from .synth import GroundTruth, SynthConfig, generate, write_corpus

__version__ = TOOL_VERSION

__all__ = [
    "AbxCell",
    "AbxReport",
    "AggregateMatrix",
    "AlignmentTable",
    "CorruptionError",
    "DataError",
    "DegenerateError",
    "FeatureFile",
    "FormatError",
    "FrameTable",
    "GroundTruth",
    "LabelingError",
    "Manifest",
    "ManifestEntry",
    "OrthogonalityStats",
    "PcaBasis",
    "PipelineConfig",
    "ProbeConfig",
    "ProbeModel",
    "RunReport",
    "Segment",
    "SimilarityMatrix",
    "SpknormError",
    "SplitSpec",
    "SynthConfig",
    "TOOL_VERSION",
    "TriphoneToken",
    "abx_error",
    "aggregate_by_phone",
    "aggregate_by_speaker",
    "aggregate_joint",
    "build_frame_table",
    "center",
    "collapse",
    "collapse_frame_table",
    "direction_similarity",
    "dtw_distance",
    "emit_plot_data",
    "evaluate_probe",
    "extract_triphones",
    "fit_pca",
    "frame_distance_matrix",
    "generate",
    "label_frames",
    "num_components_for_variance",
    "orthogonality_stats",
    "principal_angles",
    "project_coordinates",
    "read_alignments",
    "read_feature_file",
    "read_manifest",
    "read_pca_basis",
    "run_pipeline",
    "split_half_by_speaker",
    "standardize",
    "train_probe",
    "validate_manifest",
    "write_aggregate_tsv",
    "write_alignments",
    "write_cells_csv",
    "write_corpus",
    "write_feature_file",
    "write_manifest",
    "write_pca_basis",
    "write_report",
    "write_report_json",
    "write_similarity_csv",
]
