#pragma once

#include <guide/checkpoint.hpp>
#include <guide/config.hpp>
#include <guide/error.hpp>
#include <guide/graph.hpp>
#include <guide/inject.hpp>
#include <guide/io.hpp>
#include <guide/metrics.hpp>
#include <guide/model.hpp>
#include <guide/motif.hpp>
#include <guide/nn.hpp>
#include <guide/pipeline.hpp>
#include <guide/random.hpp>
#include <guide/ranking.hpp>
#include <guide/structure_io.hpp>
