// Copyright 2026 The allokit Authors
// SPDX-License-Identifier: Apache-2.0

// Built-in copies of data/lookalikes.tsv and data/xsampa.tsv. The unit tests
// check that these stay byte-identical with the shipped data files.

#ifndef ALLOKIT_IPA_TABLES_HPP
#define ALLOKIT_IPA_TABLES_HPP

#include <string_view>

namespace allokit::tables {

inline constexpr std::string_view kLookalikes = R"tsv(# Lookalike substitutions applied by allokit::normalize after canonical
# decomposition and before recomposition. One mapping per line:
# source<TAB>target. Lines starting with # are comments.
g	ɡ
꞉	ː
:	ː
'	ʼ
’	ʼ
!	ǃ
|	ǀ
α	ɑ
ε	ɛ
φ	ɸ
ǝ	ə
ʦ	t͡s
ʧ	t͡ʃ
ʤ	d͡ʒ
ʣ	d͡z
ʨ	t͡ɕ
ʥ	d͡ʑ
⁀	͡
)tsv";

inline constexpr std::string_view kXSampa = R"tsv(# X-SAMPA to IPA transliteration subset used by allokit::xsampa_to_ipa.
# One mapping per line: x-sampa<TAB>ipa. Matching is longest-prefix.
# A lone underscore that does not start a diacritic is the tie bar.
a	a
b	b
c	c
d	d
e	e
f	f
h	h
i	i
j	j
k	k
l	l
m	m
n	n
o	o
p	p
q	q
r	r
s	s
t	t
u	u
v	v
w	w
x	x
y	y
z	z
g	ɡ
A	ɑ
B	β
C	ç
D	ð
E	ɛ
F	ɱ
G	ɣ
H	ɥ
I	ɪ
J	ɲ
K	ɬ
L	ʎ
M	ɯ
N	ŋ
O	ɔ
P	ʋ
Q	ɒ
R	ʁ
S	ʃ
T	θ
U	ʊ
V	ʌ
W	ʍ
X	χ
Y	ʏ
Z	ʒ
@	ə
{	æ
}	ʉ
1	ɨ
2	ø
3	ɜ
4	ɾ
5	ɫ
6	ɐ
7	ɤ
8	ɵ
9	œ
&	ɶ
?	ʔ
?\	ʕ
<\	ʢ
>\	ʡ
r\	ɹ
R\	ʀ
l\	ɺ
L\	ʟ
j\	ʝ
J\	ɟ
G\	ɢ
h\	ɦ
x\	ɧ
s\	ɕ
z\	ʑ
p\	ɸ
B\	ʙ
H\	ʜ
I\	ᵻ
U\	ᵿ
M\	ɰ
N\	ɴ
X\	ħ
K\	ɮ
v\	ʋ
O\	ʘ
|\	ǀ
|\|\	ǁ
=\	ǂ
!\	ǃ
3\	ɞ
@\	ɘ
4\	ɺ
t`	ʈ
d`	ɖ
n`	ɳ
s`	ʂ
z`	ʐ
r`	ɽ
l`	ɭ
r\`	ɻ
@`	ɚ
`	˞
b_<	ɓ
d_<	ɗ
g_<	ɠ
J\_<	ʄ
G\_<	ʛ
:	ː
:\	ˑ
_h	ʰ
_w	ʷ
_j	ʲ
'	ʲ
_G	ˠ
_?\	ˤ
_n	ⁿ
_l	ˡ
_>	ʼ
~	̃
_~	̃
_0	̥
_v	̬
_t	̤
_k	̰
_d	̪
_a	̺
_m	̻
_+	̟
_-	̠
_"	̈
_x	̽
=	̩
_=	̩
_^	̯
_}	̚
_r	̝
_o	̞
_A	̘
_q	̙
_O	̹
_c	̜
_e	̴
_N	̼
_X	̆
_	͡
)tsv";

}  // namespace allokit::tables

#endif  // ALLOKIT_IPA_TABLES_HPP
