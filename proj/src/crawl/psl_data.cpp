// SPDX-License-Identifier: Apache-2.0
//
// Static snapshot of common public-suffix rules, same line format as the
// publicsuffix.org list (exact, "*." wildcard, "!" exception). A full list
// can be supplied via config; unknown TLDs fall back to the default rule
// (suffix = last label).
#include "crawl/url.hpp"

namespace tibcorpus::crawl {

namespace {

constexpr const char* kSnapshot = R"(// generic
com
net
org
edu
gov
mil
int
info
biz
name
pro
xyz
dev
app
io
ai
co
me
tv
cc
ws
mobi
asia
cat
jobs
tel
post
travel
museum
aero
coop
site
online
store
blog
news
cloud
space
tech
fun
live
life
world
today
shop
work
digital
email
group
link
club
design
wiki
zone
plus
// country codes
cn
com.cn
net.cn
org.cn
gov.cn
edu.cn
ac.cn
uk
co.uk
org.uk
me.uk
ltd.uk
plc.uk
net.uk
sch.uk
ac.uk
gov.uk
nhs.uk
de
fr
it
nl
es
pt
se
no
fi
dk
pl
cz
sk
hu
ro
bg
gr
tr
ru
su
ua
by
kz
jp
co.jp
or.jp
ne.jp
ac.jp
ad.jp
ed.jp
go.jp
gr.jp
lg.jp
kr
co.kr
or.kr
ne.kr
re.kr
go.kr
ac.kr
tw
com.tw
org.tw
net.tw
edu.tw
gov.tw
hk
com.hk
org.hk
net.hk
edu.hk
gov.hk
in
co.in
net.in
org.in
firm.in
gen.in
ind.in
ac.in
edu.in
res.in
gov.in
au
com.au
net.au
org.au
edu.au
gov.au
id.au
asn.au
br
com.br
net.br
org.br
gov.br
edu.br
mx
com.mx
org.mx
net.mx
edu.mx
gob.mx
ar
com.ar
net.ar
org.ar
edu.ar
gob.ar
ca
qc.ca
on.ca
bc.ca
ab.ca
za
co.za
org.za
net.za
web.za
gov.za
ac.za
nz
co.nz
net.nz
org.nz
govt.nz
ac.nz
sg
com.sg
net.sg
org.sg
edu.sg
gov.sg
my
com.my
net.my
org.my
edu.my
gov.my
th
co.th
or.th
in.th
ac.th
go.th
vn
com.vn
net.vn
org.vn
edu.vn
gov.vn
ph
com.ph
net.ph
org.ph
il
co.il
org.il
net.il
ac.il
gov.il
ch
at
be
ie
is
li
lu
mc
eu
us
bo
com.bo
org.bo
net.bo
edu.bo
gob.bo
bt
np
mn
pk
com.pk
net.pk
org.pk
edu.pk
gov.pk
bd
com.bd
net.bd
org.bd
edu.bd
gov.bd
lk
com.lk
org.lk
edu.lk
gov.lk
*.ck
!www.ck
)";

}  // namespace

const PublicSuffixList& PublicSuffixList::builtin() {
    static const PublicSuffixList psl = PublicSuffixList::from_rules(kSnapshot);
    return psl;
}

}  // namespace tibcorpus::crawl
