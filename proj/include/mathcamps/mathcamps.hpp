#pragma once

#include "mathcamps/constraints/filters.hpp"
#include "mathcamps/constraints/transforms.hpp"
#include "mathcamps/dsl/dependency_graph.hpp"
#include "mathcamps/dsl/parser.hpp"
#include "mathcamps/dsl/printer.hpp"
#include "mathcamps/dsl/rewrite.hpp"
#include "mathcamps/error.hpp"
#include "mathcamps/eval/extract.hpp"
#include "mathcamps/eval/mock_endpoints.hpp"
#include "mathcamps/eval/protocol.hpp"
#include "mathcamps/eval/reextract.hpp"
#include "mathcamps/eval/run.hpp"
#include "mathcamps/followups/diff.hpp"
#include "mathcamps/followups/realize.hpp"
#include "mathcamps/grammar/config.hpp"
#include "mathcamps/grammar/generate.hpp"
#include "mathcamps/io/json.hpp"
#include "mathcamps/pipeline/commands.hpp"
#include "mathcamps/pipeline/dataset.hpp"
#include "mathcamps/realization/cycle.hpp"
#include "mathcamps/realization/generate_problem.hpp"
#include "mathcamps/realization/http_backend.hpp"
#include "mathcamps/realization/mock_backend.hpp"
#include "mathcamps/realization/prompts.hpp"
#include "mathcamps/realization/themes.hpp"
#include "mathcamps/report/render.hpp"
#include "mathcamps/solver/solve.hpp"
