#pragma once

#include "tabpipe/stage.hpp"
#include "tabpipe/stages_basic.hpp"
#include "tabpipe/stages_cluster.hpp"
#include "tabpipe/stages_eda.hpp"
#include "tabpipe/stages_feature.hpp"
#include "tabpipe/stages_io.hpp"
#include "tabpipe/stages_plot.hpp"
#include "tabpipe/stages_sql.hpp"

namespace tabpipe {

/// All built-in stage types keyed by their pipeline-JSON stageType string.
inline const StageRegistry& stageRegistry() {
    static const StageRegistry registry = [] {
        StageRegistry reg;
        stages::registerIoStages(reg);
        stages::registerBasicStages(reg);
        stages::registerSqlStages(reg);
        stages::registerFeatureStages(reg);
        stages::registerEdaStages(reg);
        stages::registerClusterStages(reg);
        stages::registerPlotStages(reg);
        return reg;
    }();
    return registry;
}

} // namespace tabpipe
