from ._utils import entropy_of as entropy_of
from ._utils import mc_log_mean as mc_log_mean
from ._utils import compositions as compositions
from ._utils import file_digest as file_digest
from ._utils import log_multinomial as log_multinomial
from ._utils import parse_int_range as parse_int_range
from ._logsumexp import LogSumExp as LogSumExp
