// generated by src/gen_msm_para.py
static const uint64_t g_mask = 0xfffffffffffff;
static const CYBOZU_ALIGN(64) uint64_t g_mask_[] = { 0xfffffffffffff, 0xfffffffffffff, 0xfffffffffffff, 0xfffffffffffff, 0xfffffffffffff, 0xfffffffffffff, 0xfffffffffffff, 0xfffffffffffff, };
static const CYBOZU_ALIGN(64) uint64_t g_rp_[] = { 0x3fffcfffcfffd, 0x3fffcfffcfffd, 0x3fffcfffcfffd, 0x3fffcfffcfffd, 0x3fffcfffcfffd, 0x3fffcfffcfffd, 0x3fffcfffcfffd, 0x3fffcfffcfffd, };
static const CYBOZU_ALIGN(64) uint64_t g_ap_[] = {
0xeffffffffaaab, 0xeffffffffaaab, 0xeffffffffaaab, 0xeffffffffaaab, 0xeffffffffaaab, 0xeffffffffaaab, 0xeffffffffaaab, 0xeffffffffaaab,
0xfeb153ffffb9f, 0xfeb153ffffb9f, 0xfeb153ffffb9f, 0xfeb153ffffb9f, 0xfeb153ffffb9f, 0xfeb153ffffb9f, 0xfeb153ffffb9f, 0xfeb153ffffb9f,
0x6b0f6241eabff, 0x6b0f6241eabff, 0x6b0f6241eabff, 0x6b0f6241eabff, 0x6b0f6241eabff, 0x6b0f6241eabff, 0x6b0f6241eabff, 0x6b0f6241eabff,
0x12bf6730d2a0f, 0x12bf6730d2a0f, 0x12bf6730d2a0f, 0x12bf6730d2a0f, 0x12bf6730d2a0f, 0x12bf6730d2a0f, 0x12bf6730d2a0f, 0x12bf6730d2a0f,
0x764774b84f385, 0x764774b84f385, 0x764774b84f385, 0x764774b84f385, 0x764774b84f385, 0x764774b84f385, 0x764774b84f385, 0x764774b84f385,
0x1ba7b6434bacd, 0x1ba7b6434bacd, 0x1ba7b6434bacd, 0x1ba7b6434bacd, 0x1ba7b6434bacd, 0x1ba7b6434bacd, 0x1ba7b6434bacd, 0x1ba7b6434bacd,
0x1ea397fe69a4b, 0x1ea397fe69a4b, 0x1ea397fe69a4b, 0x1ea397fe69a4b, 0x1ea397fe69a4b, 0x1ea397fe69a4b, 0x1ea397fe69a4b, 0x1ea397fe69a4b,
0x1a011, 0x1a011, 0x1a011, 0x1a011, 0x1a011, 0x1a011, 0x1a011, 0x1a011,
};
static const CYBOZU_ALIGN(64) uint64_t g_m64to52u_[] = { 0x7fde37dba9366, 0x4e27525bc342b, 0x1f5b1e9778489, 0xb872b2b91b9dc, 0xb206f497dfcaf, 0x4137cc89a9b0b, 0xd9d20d7e39959, 0x411c };
static const CYBOZU_ALIGN(64) uint64_t g_m52to64u_[] = { 0x900000002fffd, 0xbc40c0002760, 0x3c758baebf400, 0x57455f4898575, 0xd77ce58537052, 0x71a97a256ec6, 0xec3fa80e4935c, 0x15f65 };
static const CYBOZU_ALIGN(64) uint64_t g_offset_[] = { 0x0, 0x1, 0x2, 0x3, 0x4, 0x5, 0x6, 0x7, 0x8, 0x9, 0xa, 0xb, 0xc, 0xd, 0xe, 0xf };
static const CYBOZU_ALIGN(64) uint64_t g_zero_[] = {
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
};
static const CYBOZU_ALIGN(64) uint64_t g_R_[] = {
0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af,
0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f,
0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d,
0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422,
0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5,
0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230,
0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25,
0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e,
};
static const CYBOZU_ALIGN(64) uint64_t g_R2_[] = {
0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51,
0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2,
0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1,
0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903,
0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311,
0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5,
0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266,
0x8746, 0x8746, 0x8746, 0x8746, 0x8746, 0x8746, 0x8746, 0x8746,
};
static const CYBOZU_ALIGN(64) uint64_t g_rawOne_[] = {
0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
};
static const CYBOZU_ALIGN(64) uint64_t g_m64to52_[] = {
0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366,
0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b,
0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489,
0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc,
0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf,
0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b,
0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959,
0x411c, 0x411c, 0x411c, 0x411c, 0x411c, 0x411c, 0x411c, 0x411c,
};
static const CYBOZU_ALIGN(64) uint64_t g_m52to64_[] = {
0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd,
0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760,
0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400,
0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575,
0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052,
0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6,
0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c,
0x15f65, 0x15f65, 0x15f65, 0x15f65, 0x15f65, 0x15f65, 0x15f65, 0x15f65,
};
static const CYBOZU_ALIGN(64) uint64_t g_rw_[] = {
0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648,
0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739,
0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2,
0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964,
0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8,
0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e,
0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329,
0x17601, 0x17601, 0x17601, 0x17601, 0x17601, 0x17601, 0x17601, 0x17601,
};
static const CYBOZU_ALIGN(64) uint64_t g_b3_[] = {
0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431,
0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19,
0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0,
0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713,
0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711,
0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e,
0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24,
0xf618, 0xf618, 0xf618, 0xf618, 0xf618, 0xf618, 0xf618, 0xf618,
};
static const CYBOZU_ALIGN(64) uint64_t g_zeroJacobi_[] = {
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
};
static const CYBOZU_ALIGN(64) uint64_t g_zeroProj_[] = {
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
};
static const CYBOZU_ALIGN(64) uint64_t g_zeroA_[] = {
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
};
static const CYBOZU_ALIGN(64) uint64_t g_RA_[] = {
0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af, 0x6480ea8e9b9af,
0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f, 0x65766c8fe444f,
0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d, 0x8b540fea96f7d,
0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422, 0x3b2ee82efd422,
0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5, 0xa6723e5f0ade5,
0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230, 0xff6eb6fdd4230,
0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25, 0xe06ef23c24a25,
0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e, 0x14c8e,
};
static const CYBOZU_ALIGN(64) uint64_t g_R2A_[] = {
0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51, 0xa5bf4cb89af51,
0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2, 0x3afbba7ca31a2,
0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1, 0x2646160ec71f1,
0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903, 0xa84d710465903,
0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311, 0x3480a4a188311,
0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5, 0x98e5907ad91f5,
0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266, 0x2075d74507266,
0x8746, 0x8746, 0x8746, 0x8746, 0x8746, 0x8746, 0x8746, 0x8746, 0x8746, 0x8746, 0x8746, 0x8746, 0x8746, 0x8746, 0x8746, 0x8746,
};
static const CYBOZU_ALIGN(64) uint64_t g_rawOneA_[] = {
0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
};
static const CYBOZU_ALIGN(64) uint64_t g_m64to52A_[] = {
0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366, 0x7fde37dba9366,
0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b, 0x4e27525bc342b,
0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489, 0x1f5b1e9778489,
0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc, 0xb872b2b91b9dc,
0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf, 0xb206f497dfcaf,
0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b, 0x4137cc89a9b0b,
0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959, 0xd9d20d7e39959,
0x411c, 0x411c, 0x411c, 0x411c, 0x411c, 0x411c, 0x411c, 0x411c, 0x411c, 0x411c, 0x411c, 0x411c, 0x411c, 0x411c, 0x411c, 0x411c,
};
static const CYBOZU_ALIGN(64) uint64_t g_m52to64A_[] = {
0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd, 0x900000002fffd,
0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760, 0xbc40c0002760,
0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400, 0x3c758baebf400,
0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575, 0x57455f4898575,
0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052, 0xd77ce58537052,
0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6, 0x71a97a256ec6,
0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c, 0xec3fa80e4935c,
0x15f65, 0x15f65, 0x15f65, 0x15f65, 0x15f65, 0x15f65, 0x15f65, 0x15f65, 0x15f65, 0x15f65, 0x15f65, 0x15f65, 0x15f65, 0x15f65, 0x15f65, 0x15f65,
};
static const CYBOZU_ALIGN(64) uint64_t g_rwA_[] = {
0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648, 0xa424657e25648,
0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739, 0xc75706049e739,
0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2, 0xb59085299e0e2,
0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964, 0xd9cf17286a964,
0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8, 0x69ec7cb33aa8,
0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e, 0x35e995b239c7e,
0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329, 0x82faa0ff3c329,
0x17601, 0x17601, 0x17601, 0x17601, 0x17601, 0x17601, 0x17601, 0x17601, 0x17601, 0x17601, 0x17601, 0x17601, 0x17601, 0x17601, 0x17601, 0x17601,
};
static const CYBOZU_ALIGN(64) uint64_t g_b3A_[] = {
0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431, 0x460afeaf7b431,
0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19, 0xcd5122beb5b19,
0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0, 0xc4664aadd2de0,
0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713, 0x1d78417c77713,
0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711, 0xa4d7d1f9b9711,
0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e, 0x4b2b884890e,
0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24, 0x717302e000d24,
0xf618, 0xf618, 0xf618, 0xf618, 0xf618, 0xf618, 0xf618, 0xf618, 0xf618, 0xf618, 0xf618, 0xf618, 0xf618, 0xf618, 0xf618, 0xf618,
};
static const CYBOZU_ALIGN(64) uint64_t g_zeroJacobiA_[] = {
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
};
static const CYBOZU_ALIGN(64) uint64_t g_zeroProjA_[] = {
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1, 0x1,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0, 0x0,
};

struct G {
	static const Vec& mask() { return *(const Vec*)g_mask_; }
	static const Vec& rp() { return *(const Vec*)g_rp_; }
	static const Vec* ap() { return (const Vec*)g_ap_; }
};

