#pragma once

#include "formula.hpp"
#include "tableau.hpp"
#include "trace.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ltlkit
{

struct BruteForceResult
{
  /// false means unsatisfiable up to the bound, not unsatisfiable.
  bool satisfiable = false;
  std::optional<Model> witness;
};

namespace detail
{

/*! \brief Evaluates a formula on a block of up to 4096 traces at once.

  All traces in a block share one shape (length, and loop start for
  lassos). Trace number t labels proposition a at position k when bit
  k*|alphabet|+a of t is set; the low 12 bits vary inside the block and
  the rest come from the block number.
*/
class SlicedEvaluator
{
public:
  static constexpr std::size_t words = 64;
  static constexpr std::size_t block_bits = 12;
  using Slice = std::array<std::uint64_t, words>;

  SlicedEvaluator( Formula const& f, std::vector<std::string> alphabet )
    : order_( subformulas( f ) ), alphabet_( std::move( alphabet ) )
  {
    for ( std::size_t i = 0; i < order_.size(); ++i )
      slot_.emplace( order_[i], i );
    for ( std::size_t b = 0; b < block_bits; ++b )
      for ( std::size_t w = 0; w < words; ++w )
      {
        std::uint64_t m = 0;
        for ( std::size_t j = 0; j < 64; ++j )
          if ( ( ( w * 64 + j ) >> b ) & 1 )
            m |= std::uint64_t{ 1 } << j;
        pattern_[b][w] = m;
      }
  }

  /// Returns the index inside the block of a trace satisfying f at 0, if any.
  /// `loop_start` is the length for finite traces.
  std::optional<std::size_t> run( std::size_t length, std::size_t loop_start, std::uint64_t block, std::size_t valid )
  {
    bool const finite = loop_start == length;
    values_.assign( order_.size(), std::vector<Slice>( length ) );
    for ( std::size_t s = 0; s < order_.size(); ++s )
    {
      auto const& g = order_[s];
      auto& out = values_[s];
      switch ( g.kind() )
      {
      case Kind::True:
        for ( auto& sl : out )
          sl.fill( ~std::uint64_t{ 0 } );
        break;
      case Kind::Prop:
      {
        std::size_t a = 0;
        while ( a < alphabet_.size() && alphabet_[a] != g.name() )
          ++a;
        for ( std::size_t k = 0; k < length; ++k )
        {
          if ( a == alphabet_.size() )
          {
            out[k].fill( 0 );
            continue;
          }
          std::size_t const bit = k * alphabet_.size() + a;
          if ( bit < block_bits )
            out[k] = pattern_[bit];
          else
            out[k].fill( ( ( block >> ( bit - block_bits ) ) & 1 ) ? ~std::uint64_t{ 0 } : 0 );
        }
        break;
      }
      case Kind::Not:
      {
        auto const& a = at( g.arg() );
        for ( std::size_t k = 0; k < length; ++k )
          for ( std::size_t w = 0; w < words; ++w )
            out[k][w] = ~a[k][w];
        break;
      }
      case Kind::And:
      {
        auto const& a = at( g.lhs() );
        auto const& b = at( g.rhs() );
        for ( std::size_t k = 0; k < length; ++k )
          for ( std::size_t w = 0; w < words; ++w )
            out[k][w] = a[k][w] & b[k][w];
        break;
      }
      case Kind::Next:
      {
        auto const& a = at( g.arg() );
        for ( std::size_t k = 0; k < length; ++k )
        {
          if ( k + 1 < length )
            out[k] = a[k + 1];
          else if ( finite )
            out[k].fill( ~std::uint64_t{ 0 } );
          else
            out[k] = a[loop_start];
        }
        break;
      }
      case Kind::Until:
      {
        auto const& a = at( g.lhs() );
        auto const& b = at( g.rhs() );
        for ( auto& sl : out )
          sl.fill( 0 );
        // one sweep settles the loop entry; the second settles the rest
        int const sweeps = finite ? 1 : 2;
        for ( int s2 = 0; s2 < sweeps; ++s2 )
          for ( std::size_t k = length; k-- > 0; )
          {
            bool const has_next = k + 1 < length || !finite;
            std::size_t const nk = k + 1 < length ? k + 1 : loop_start;
            for ( std::size_t w = 0; w < words; ++w )
              out[k][w] = b[k][w] | ( a[k][w] & ( has_next ? out[nk][w] : 0 ) );
          }
        break;
      }
      default:
        throw std::invalid_argument( "brute force search handles plain LTL only" );
      }
    }
    auto const& root = values_.back()[0];
    for ( std::size_t w = 0; w < words; ++w )
    {
      std::uint64_t m = root[w];
      if ( w * 64 >= valid )
        break;
      if ( valid < ( w + 1 ) * 64 )
        m &= ( std::uint64_t{ 1 } << ( valid - w * 64 ) ) - 1;
      if ( m )
        return w * 64 + static_cast<std::size_t>( __builtin_ctzll( m ) );
    }
    return std::nullopt;
  }

private:
  std::vector<Slice> const& at( Formula const& g ) const { return values_[slot_.at( g )]; }

  std::vector<Formula> order_;
  FormulaMap<std::size_t> slot_;
  std::vector<std::string> alphabet_;
  std::array<Slice, block_bits> pattern_{};
  std::vector<std::vector<Slice>> values_;
};

inline std::vector<Valuation> decode_states( std::uint64_t index, std::size_t length, std::vector<std::string> const& alphabet )
{
  std::vector<Valuation> states( length );
  for ( std::size_t k = 0; k < length; ++k )
    for ( std::size_t a = 0; a < alphabet.size(); ++a )
      if ( ( index >> ( k * alphabet.size() + a ) ) & 1 )
        states[k].insert( alphabet[a] );
  return states;
}

} // namespace detail

/*! \brief Exhaustive search for a model of f at position 0.

  Enumerates every finite trace (fin, gen) of length 1..max_total and
  every lasso (inf, gen) with prefix plus loop of 1..max_total states
  over the propositions of f.
*/
inline BruteForceResult brute_force_sat( Formula const& f, StructureClass cls, std::size_t max_total )
{
  auto const alphabet = propositions( f );
  if ( alphabet.size() > 3 )
    throw std::invalid_argument( "brute force search supports at most 3 propositions" );
  if ( max_total == 0 || max_total > 10 )
    throw std::invalid_argument( "brute force bound must be in 1..10" );

  detail::SlicedEvaluator ev( f, alphabet );
  std::size_t const block_size = std::size_t{ 1 } << detail::SlicedEvaluator::block_bits;

  auto search = [&]( std::size_t length, std::size_t loop_start ) -> std::optional<std::uint64_t> {
    std::size_t const bits = length * alphabet.size();
    std::uint64_t const total = std::uint64_t{ 1 } << bits;
    std::uint64_t const blocks = total <= block_size ? 1 : total / block_size;
    std::size_t const valid = total <= block_size ? static_cast<std::size_t>( total ) : block_size;
    for ( std::uint64_t block = 0; block < blocks; ++block )
      if ( auto hit = ev.run( length, loop_start, block, valid ) )
        return block * block_size + *hit;
    return std::nullopt;
  };

  for ( std::size_t n = 1; n <= max_total; ++n )
  {
    if ( cls != StructureClass::inf )
      if ( auto idx = search( n, n ) )
        return { true, FiniteTrace( detail::decode_states( *idx, n, alphabet ) ) };
    if ( cls != StructureClass::fin )
      for ( std::size_t start = 0; start < n; ++start )
        if ( auto idx = search( n, start ) )
        {
          auto states = detail::decode_states( *idx, n, alphabet );
          std::vector<Valuation> prefix( states.begin(), states.begin() + static_cast<std::ptrdiff_t>( start ) );
          std::vector<Valuation> loop( states.begin() + static_cast<std::ptrdiff_t>( start ), states.end() );
          return { true, LassoTrace( std::move( prefix ), std::move( loop ) ) };
        }
  }
  return { false, std::nullopt };
}

} // namespace ltlkit
