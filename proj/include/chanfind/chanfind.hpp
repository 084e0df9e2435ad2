#pragma once

// Everything except the live HTTP transport (chanfind/http_transport.hpp).

#include "chanfind/errors.hpp"
#include "chanfind/text.hpp"
#include "chanfind/document.hpp"
#include "chanfind/channel_db.hpp"
#include "chanfind/selector.hpp"
#include "chanfind/json_schema.hpp"
#include "chanfind/llm.hpp"
#include "chanfind/finder.hpp"
#include "chanfind/direct_lookup.hpp"
#include "chanfind/hierarchical_nav.hpp"
#include "chanfind/agent_explorer.hpp"
#include "chanfind/middle_layer.hpp"
#include "chanfind/ontology.hpp"
#include "chanfind/bench.hpp"
#include "chanfind/synthetic.hpp"
#include "chanfind/cli.hpp"
