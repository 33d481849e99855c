CYCLIC_GRAPH = "The network graph contains a cycle"
UNKNOWN_NEURON = "Neuron does not exist in this architecture"
DIMENSION_MISMATCH = "Input width does not match the number of input neurons"
PATH_BUDGET_EXCEEDED = "Path enumeration exceeds the configured path budget"
INVALID_NORM_SPEC = "q must be finite and positive, r must be positive"
NON_POSITIVE_SCALE = "Rescaling factor must be strictly positive"
NOT_HIDDEN_NEURON = "Only hidden neurons can be rescaled"
POOL_BIAS_NON_ZERO = "k-max-pooling neurons must have null biases"
BIASED_IDENTITY_NEURON = "Identity neurons with a nonzero bias cannot be merged"
EMPTY_KERNEL = "A pooling neuron needs at least one antecedent"
EMPTY_DATASET = "The dataset has no samples"
OUT_OF_RANGE_LABEL = "Label is outside the range of output classes"
NON_POSITIVE_GAMMA = "The margin gamma must be strictly positive"
PARSE_ERROR = "Network file could not be parsed"
INVALID_NETWORK = "Network is not a valid architecture"
PARALLEL_EDGE = "parallel edge"
