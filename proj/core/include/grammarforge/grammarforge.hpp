#pragma once

#include "grammarforge/analysis.hpp"
#include "grammarforge/ast.hpp"
#include "grammarforge/char_queue.hpp"
#include "grammarforge/composition.hpp"
#include "grammarforge/engine.hpp"
#include "grammarforge/error.hpp"
#include "grammarforge/grammar.hpp"
#include "grammarforge/grammar_set.hpp"
#include "grammarforge/lexer.hpp"
#include "grammarforge/regex.hpp"
#include "grammarforge/schema.hpp"
#include "grammarforge/traversal.hpp"
