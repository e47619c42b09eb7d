"""pairgen: generation-by-pairs analytics for finite permutation groups.

The package provides certified stabilizer chains, exact order censuses,
generation probabilities for pairs of prescribed element orders,
maximal-subgroup lower bounds, straight-line word programs, exact
cyclotomic arithmetic, and character-table certificates.
"""

from .census import (
    ConjugacyClassList,
    OrderCensus,
    conjugacy_classes,
    order_census,
)
from .chartab import (
    CharacterTable,
    cmc,
    cmc_scan,
    make_table,
    phi_divisibility,
    validate,
)
from .cyclo import CyclotomicNumber, parse_cyclotomic
from .genprob import (
    gen_probability,
    generating_pair_count,
    generating_pair_scan,
    naive_pair_count,
)
from .io import (
    GroupBundle,
    data_path,
    decimal5,
    load_bundle,
    load_character_table,
    load_maximal_records,
    load_perm_file,
)
from .maxbound import MaximalSubgroupRecord, lower_bound, subgroup_census
from .perm import (
    MAX_DEGREE,
    EnumerationLimitError,
    Permutation,
    StabilizerChain,
    build_chain,
    compose,
    contains,
    element_order,
    enumerate_elements,
    identity,
    inverse,
    power,
    random_element,
)
from .wordprog import evaluate, parse_program, parse_program_lenient

__version__ = "0.1.0"
