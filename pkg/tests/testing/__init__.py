from .assertions import *
from .statistics import *
