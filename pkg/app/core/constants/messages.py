ERROR_TENSOR_SHAPE_MISMATCH = "Tensor shape does not match its data length"
ERROR_TENSOR_NOT_FINITE = "Tensor contains NaN or Inf values"
ERROR_TENSOR_RANK = "Only rank-1 and rank-2 tensors are supported"
ERROR_TENSOR_EMPTY_SHAPE = "Tensor shape must contain positive integers"

ERROR_NET_INPUT_DIM = "Input length does not match the network input size"
ERROR_NET_OUTPUT_GRAD_DIM = (
    "Output gradient length does not match the network output size"
)
ERROR_NET_LAYERS_CHAIN = "Consecutive layer dimensions do not chain"
ERROR_NET_EMPTY = "A network needs at least one layer"
ERROR_NET_STALE_TRACE = "Trace was not produced by this network"
ERROR_NET_GRADS_SHAPE = "Gradient shapes do not match the network parameters"
ERROR_NON_FINITE_GRADIENT = "Gradient contains NaN or Inf values"
ERROR_LOSS_LENGTH_MISMATCH = "Prediction and target lengths differ"
ERROR_EPS_NOT_POSITIVE = "Finite difference step must be positive"

ERROR_NODE_NOT_FOUND = "Node not found"
ERROR_NODE_ALREADY_EXISTS = "Node already exists"
ERROR_NODE_SHAPE_MISMATCH = "Value shape does not match the Node"
ERROR_NODE_NOT_ACCUMULATOR = "Node is not an accumulator"
ERROR_NODE_STILL_REFERENCED = "Node is still referenced by a Processing Unit"
ERROR_NODE_SUMMARY_SIZE = "Summary size must be between 0 and the Node size"
ERROR_NODE_GRAD_SHAPE = "Gradient shape does not match the Node value"

ERROR_PU_NOT_FOUND = "Processing Unit not found"
ERROR_PU_ALREADY_EXISTS = "Processing Unit already exists"
ERROR_PU_DUPLICATE_INPUT = "A Processing Unit may not read a Node twice"
ERROR_PU_DUPLICATE_OUTPUT = "A Processing Unit may not write a Node twice"
ERROR_PU_INPUT_DIM = (
    "Network input size does not match the summed input Node sizes"
)
ERROR_PU_OUTPUT_DIM = (
    "Network output size does not match the summed output Node sizes"
)
ERROR_PU_NO_OUTPUTS = "A Processing Unit needs at least one output Node"

ERROR_ENV_NOT_FOUND = "Environment not found"
ERROR_ENV_ALREADY_EXISTS = "Environment already exists"
ERROR_ENV_SIGNAL_LENGTH = "Environment signal length changed"
ERROR_ENV_ACTION_INDEX = "Environment action index out of range"
ERROR_ACTION_NOT_FOUND = "Action not found in the catalog"
ERROR_ACTION_CATALOG_EMPTY = "Action catalog is empty"
ERROR_ACTION_ALREADY_REGISTERED = "Action is already registered"
ERROR_ACTION_CAPACITY = "Action catalog exceeds the Control Unit capacity"

ERROR_TAPE_STEP_ORDER = "Tape entries must have strictly increasing steps"
ERROR_TAPE_CAPACITY = "Tape capacity must be at least the horizon"
ERROR_ROUTE_SCALE = "Interference scale must lie in (0, 1]"

ERROR_BUFFER_TOO_SMALL = "Replay buffer holds fewer transitions than asked"
ERROR_BATCH_EMPTY = "A TD update needs at least one transition"
ERROR_REWARD_NOT_FINITE = "Reward must be finite"

ERROR_SNAPSHOT_CHECKSUM = "PU parameters differ from the snapshot"
ERROR_SNAPSHOT_STRUCTURE = "Snapshot Nodes do not match the network"

ERROR_WHEELS_NO_SCRIPT = "No scripted policy is defined for this experiment"
ERROR_PRETRAIN_NO_LABELS = "No oracle labels are defined for this experiment"
ERROR_CONFIG_OVERRIDE_FORMAT = "Overrides must have the form key.path=value"
ERROR_CONFIG_UNKNOWN_KEY = "Unknown config key"
ERROR_CONFIG_FILE_NOT_FOUND = "Config file not found"
ERROR_CONFIG_NOT_MAPPING = "Config file must contain a mapping"
ERROR_STREAK_THRESHOLD = "Curriculum streak thresholds must be at least 1"
ERROR_LAYER_WIDTH = "Hidden layer widths must be positive"
ERROR_LEARNING_RATE = "Learning rate must be positive"
ERROR_GAMMA_RANGE = "Discount factor must lie in [0, 1]"
ERROR_EPSILON_RANGE = "Exploration rates must lie in [0, 1]"
ERROR_METRICS_FILE_NOT_FOUND = "Metrics file not found"
ERROR_SNAPSHOT_FILE_NOT_FOUND = "Snapshot file not found"
ERROR_PARAMETER_FILE_NOT_FOUND = "Parameter file not found"
ERROR_ENV_HANDLER_FAILED = "Environment handler failed"
ERROR_REWARD_FINALIZED = "The iteration reward was already finalized"

MESSAGE_RUN_STARTED = "Run started"
MESSAGE_RUN_FINISHED = "Run finished"
MESSAGE_SNAPSHOT_WRITTEN = "Snapshot written"
MESSAGE_PRETRAIN_CONVERGED = "Pretraining converged"
MESSAGE_PRETRAIN_NOT_CONVERGED = (
    "Pretraining did not reach the loss threshold within the sample budget"
)
MESSAGE_PLOT_WRITTEN = "Plot written"
MESSAGE_SWEEP_FINISHED = "Sweep finished"
