"""cellspace: a deterministic composition engine that organizes notebook
cells and their execution-order graph into spatial structures in a 3D
workspace."""

from .commands import CommandKind, TriggerCommand, dump_commands, load_commands
from .geometry import Pose
from .gestures import (
    GestureInterpreter,
    GestureThresholds,
    Hand,
    HandPoseEvent,
    classify_segment,
    ingest,
    replay_trace,
)
from .layout import (
    LayoutParameterError,
    initial_circular_layout,
    layout_cluster,
    layout_grid,
    layout_linear_linear,
    layout_loop_circle,
    layout_parallel_tree,
    layout_skip_fold,
    layout_skip_layer,
    layout_skip_pile,
    route_edges,
)
from .metrics import (
    CostModel,
    Policy,
    PositionTrace,
    metrics_report,
    movement_count,
    op_count,
    travel_distance,
)
from .model import (
    AnalysisPhase,
    Cell,
    CellKind,
    ExecutionEdge,
    ExecutionOrderKind,
    LayerDirection,
    LayoutConfig,
    LayoutKind,
    Orientation,
    Structure,
    StructureKind,
    StructureParams,
    ValidationReport,
    Workspace,
    validate_workspace,
)
from .notebook import NotebookError, NotebookParseError, NotebookSchemaError, import_notebook
from .operations import (
    OperationError,
    apply_structure,
    adjust_dimensions,
    adjust_orientation,
    apply_command,
    cycle_cluster_mode,
    detach_or_insert_cell,
    merge_structures,
    move_structure,
    replay_commands,
    rewire_edge,
    toggle_indicators,
)
from .sceneio import (
    SceneFormatError,
    canonical_dumps,
    load_scene,
    parse_workspace,
    save_scene,
    serialize_workspace,
)

__version__ = "0.1.0"
