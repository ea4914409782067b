"""vidplan: planning and simulation toolkit for keyframe-aware video analytics.

Tunes encoder keyframe placement against labelled object-change events,
extracts and chunks I-frames from metadata alone, and picks the edge/cloud
split of a layered network under a pipelined-execution cost model backed by
a discrete-event simulator.
"""

from .dataset import (
    Event,
    EventTimeline,
    FrameRecord,
    FrameStream,
    SynthSpec,
    load_events,
    load_frame_index,
    synth_dataset,
    write_events,
    write_frame_index,
)
from .encodersim import (
    EncoderConfig,
    Placement,
    TuneResult,
    event_accuracy,
    f1_score,
    filter_rate,
    simulate_placement,
    tune,
)
from .errors import ParseError, ValidationError
from .nnmodel import (
    LayerProfile,
    NetworkProfile,
    StageTimes,
    cloud_suffix_time,
    edge_prefix_time,
    load_profile,
    stage_times,
    transmit_time,
    update_profile,
    write_profile,
)
from .partition import (
    PartitionPlan,
    RepartitionPolicy,
    choose_partition,
    chunk_completion_time,
    effective_chunk_size,
    evaluate_all_cuts,
    should_repartition,
)
from .pipesim import FrameTrace, PipelineSpec, simulate, simulate_stream
from .seeker import (
    Chunk,
    SeekStats,
    chunkify,
    seek_iframes,
    threshold_sample,
    transfer_report,
    uniform_sample,
)

__version__ = "0.1.0"

__all__ = [
    "Chunk",
    "EncoderConfig",
    "Event",
    "EventTimeline",
    "FrameRecord",
    "FrameStream",
    "FrameTrace",
    "LayerProfile",
    "NetworkProfile",
    "ParseError",
    "PartitionPlan",
    "PipelineSpec",
    "Placement",
    "RepartitionPolicy",
    "SeekStats",
    "StageTimes",
    "SynthSpec",
    "TuneResult",
    "ValidationError",
    "choose_partition",
    "chunk_completion_time",
    "chunkify",
    "cloud_suffix_time",
    "edge_prefix_time",
    "effective_chunk_size",
    "evaluate_all_cuts",
    "event_accuracy",
    "f1_score",
    "filter_rate",
    "load_events",
    "load_frame_index",
    "load_profile",
    "seek_iframes",
    "should_repartition",
    "simulate",
    "simulate_placement",
    "simulate_stream",
    "stage_times",
    "synth_dataset",
    "threshold_sample",
    "transfer_report",
    "transmit_time",
    "tune",
    "uniform_sample",
    "update_profile",
    "write_events",
    "write_frame_index",
    "write_profile",
]
