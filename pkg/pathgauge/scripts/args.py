from pathgauge.scripts.commands.bound import Bound, MarginBoundCommand
from pathgauge.scripts.commands.norms import Lipschitz, OpNorm, PathNorm
from pathgauge.scripts.commands.normalize import Normalize
from pathgauge.scripts.commands.oracle_diff import OracleDiff
from pathgauge.scripts.commands.transform import Transform
from pathgauge.scripts.commands.validate import Validate

HELPERS = {
    "validate": [Validate, "Checks a network file against the architecture invariants"],
    "pathnorm": [PathNorm, "Mixed path-norm ||Phi||_{q,r} of a network"],
    "normalize": [Normalize, "Writes the q-normalized parameters of a network"],
    "lipschitz": [Lipschitz, "Lipschitz bound ||Phi||_{1,r} in the input"],
    "opnorm": [OpNorm, "DAG product of operator norms Pi_{q,r} next to the path-norm"],
    "transform": [Transform, "Applies absorb-biases, drop-identity or pool-to-id"],
    "oracle-diff": [OracleDiff, "Fast routes against the path enumeration oracles"],
    "bound": [Bound, "Generalization bound and its constants"],
    "margin-bound": [MarginBoundCommand, "Margin-based bound on the misclassification probability"],
}
