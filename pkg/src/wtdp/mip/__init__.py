from .model import (FORMULATIONS, InvalidOptions, LinearConstraint, MipModel, MissingVariable,
                    ModelOptions, Variable, VerifyReport, build_model, clique_constraint,
                    encode_solution, extcost_cut, model_objective, tdomy_constraint,
                    verify_assignment)
from .separation import (FractionalPoint, edge_clique_cover, extcost_rhs, separate_clique,
                         separate_extcost, separate_tdomy, violation)
from .lpfile import (model_from_text, model_to_text, parse_assignment, read_assignment,
                     read_model, write_model, write_priorities, priorities_to_text)
from .lpfile import LpFormatError, read_priorities, assignment_to_text
