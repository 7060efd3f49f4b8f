#pragma once

#include "stocon/batch.hpp"
#include "stocon/cost.hpp"
#include "stocon/error.hpp"
#include "stocon/log.hpp"
#include "stocon/log_io.hpp"
#include "stocon/net.hpp"
#include "stocon/net_io.hpp"
#include "stocon/oracle.hpp"
#include "stocon/perturb.hpp"
#include "stocon/report.hpp"
#include "stocon/search.hpp"
#include "stocon/svg.hpp"
#include "stocon/sweep.hpp"
#include "stocon/sync_product.hpp"
#include "stocon/trace_net.hpp"
